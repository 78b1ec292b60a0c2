use std::collections::VecDeque;

use num_traits::Signed;

use super::{components_of, Graph, GraphError, DEFAULT_VERTEX_CAP};
use crate::linalg::{usize_rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Toughness {
    Holds,
    /// Removing `removed` leaves `components` components.
    Counterexample { removed: Vec<usize>, components: usize },
}

impl Toughness {
    pub fn holds(&self) -> bool {
        matches!(self, Toughness::Holds)
    }
}

/// Checks `t`-toughness by removing every vertex subset.
///
/// A set `U` violates the bound when its removal raises the component count
/// and `(c(G - U) - c(G) + 1) * t > |U|`; for connected graphs this is the
/// usual `c(G - U) <= |U| / t` whenever `G - U` is disconnected. The reported
/// counterexample has minimum size, then minimum vertex bitmask.
pub fn toughness_verify(g: &Graph, t: &Rational) -> Result<Toughness, GraphError> {
    let n = g.vertex_count();
    if n > DEFAULT_VERTEX_CAP {
        return Err(GraphError::CapExceeded { what: "vertex set", size: n, cap: DEFAULT_VERTEX_CAP });
    }
    assert!(t.is_positive(), "toughness parameter must be positive");
    let base = components_of(n, g.edges().iter().copied());
    let mut best: Option<(usize, u64, usize)> = None;
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if best.is_some_and(|(s, _, _)| size > s) {
            continue;
        }
        let removed = size;
        let edges = g.edges().iter().copied().filter(|&(u, v)| mask >> u & 1 == 0 && mask >> v & 1 == 0);
        let c = components_of(n, edges) - removed;
        if c > base && usize_rat(c - base + 1) * t > usize_rat(size) {
            let cand = (size, mask, c);
            if best.is_none_or(|b| (cand.0, cand.1) < (b.0, b.1)) {
                best = Some(cand);
            }
        }
    }
    Ok(match best {
        None => Toughness::Holds,
        Some((_, mask, components)) => Toughness::Counterexample {
            removed: (0..n).filter(|v| mask >> v & 1 == 1).collect(),
            components,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchingResult {
    /// Edge indices of a perfect matching.
    PerfectMatching(Vec<usize>),
    /// For every vertex `v`, a perfect matching of `G - v`.
    NearPerfect(Vec<(usize, Vec<usize>)>),
    Neither,
}

/// Perfect matching for even vertex counts; for odd counts, perfect matchings
/// of every vertex-deleted subgraph.
pub fn near_perfect_matching(g: &Graph) -> Result<MatchingResult, GraphError> {
    let n = g.vertex_count();
    if n > DEFAULT_VERTEX_CAP {
        return Err(GraphError::CapExceeded { what: "vertex set", size: n, cap: DEFAULT_VERTEX_CAP });
    }
    if n % 2 == 0 {
        return Ok(match perfect_matching(g, None) {
            Some(m) => MatchingResult::PerfectMatching(m),
            None => MatchingResult::Neither,
        });
    }
    let mut per_vertex = Vec::with_capacity(n);
    for v in 0..n {
        match perfect_matching(g, Some(v)) {
            Some(m) => per_vertex.push((v, m)),
            None => return Ok(MatchingResult::Neither),
        }
    }
    Ok(MatchingResult::NearPerfect(per_vertex))
}

/// Backtracking search; returns edge indices in increasing order.
pub fn perfect_matching(g: &Graph, skip: Option<usize>) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut incident: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        incident[u].push((v, i));
        incident[v].push((u, i));
    }
    let mut matched = vec![false; n];
    if let Some(s) = skip {
        matched[s] = true;
    }
    let mut chosen = Vec::new();
    fn search(incident: &[Vec<(usize, usize)>], matched: &mut [bool], chosen: &mut Vec<usize>) -> bool {
        let Some(u) = matched.iter().position(|&m| !m) else {
            return true;
        };
        matched[u] = true;
        for &(v, e) in &incident[u] {
            if !matched[v] {
                matched[v] = true;
                chosen.push(e);
                if search(incident, matched, chosen) {
                    return true;
                }
                chosen.pop();
                matched[v] = false;
            }
        }
        matched[u] = false;
        false
    }
    if search(&incident, &mut matched, &mut chosen) {
        chosen.sort_unstable();
        Some(chosen)
    } else {
        None
    }
}

/// Maximum number of edge-disjoint spanning forests.
pub fn tree_packing(g: &Graph) -> Result<usize, GraphError> {
    let r = g.full_rank();
    if r == 0 {
        return Err(GraphError::EmptyEdgeSet);
    }
    let upper = g.edge_count() / r;
    let mut best = 0;
    for k in 1..=upper {
        if disjoint_forests(g, k).is_some() {
            best = k;
        } else {
            break;
        }
    }
    Ok(best)
}

/// Partitions edges into `k` forests covering as much as possible; returns the
/// forest of each edge when all `k` forests are spanning.
pub fn disjoint_forests(g: &Graph, k: usize) -> Option<Vec<Option<usize>>> {
    let m = g.edge_count();
    let n = g.vertex_count();
    let mut owner: Vec<Option<usize>> = vec![None; m];

    // Path between the endpoints of `x` inside forest `i`, as edge indices.
    let forest_path = |owner: &[Option<usize>], i: usize, x: usize| -> Option<Vec<usize>> {
        let (s, t) = g.edges()[x];
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                break;
            }
            for (e, &(a, b)) in g.edges().iter().enumerate() {
                if owner[e] != Some(i) || (a != u && b != u) {
                    continue;
                }
                let w = if a == u { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some(e);
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = t;
        while cur != s {
            let e = via[cur].expect("path edge");
            path.push(e);
            let (a, b) = g.edges()[e];
            cur = if a == cur { b } else { a };
        }
        Some(path)
    };

    for e in 0..m {
        // Breadth-first search for a shortest augmenting path from e.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; m];
        let mut visited = vec![false; m];
        visited[e] = true;
        let mut queue = VecDeque::from([e]);
        let mut found: Option<(usize, usize)> = None;
        'bfs: while let Some(x) = queue.pop_front() {
            for i in 0..k {
                if owner[x] == Some(i) {
                    continue;
                }
                match forest_path(&owner, i, x) {
                    None => {
                        found = Some((x, i));
                        break 'bfs;
                    }
                    Some(cycle) => {
                        for y in cycle {
                            if !visited[y] {
                                visited[y] = true;
                                parent[y] = Some((x, i));
                                queue.push_back(y);
                            }
                        }
                    }
                }
            }
        }
        if let Some((mut x, i)) = found {
            owner[x] = Some(i);
            while let Some((p, j)) = parent[x] {
                owner[p] = Some(j);
                x = p;
            }
        }
    }
    let r = g.full_rank();
    let sizes = (0..k).map(|i| owner.iter().filter(|&&o| o == Some(i)).count());
    sizes.into_iter().all(|s| s == r).then_some(owner)
}

#[cfg(test)]
mod tests {
    use super::super::named;
    use super::*;
    use crate::linalg::{int, rat};

    #[test]
    fn toughness_examples() {
        assert_eq!(toughness_verify(&named::complete(4), &int(1)).unwrap(), Toughness::Holds);
        assert_eq!(toughness_verify(&named::cycle(4), &int(1)).unwrap(), Toughness::Holds);
        assert!(!toughness_verify(&named::cycle(4), &rat(3, 2)).unwrap().holds());
        assert_eq!(
            toughness_verify(&named::star(3), &int(1)).unwrap(),
            Toughness::Counterexample { removed: vec![0], components: 3 }
        );
        assert!(toughness_verify(&named::petersen(), &rat(4, 3)).unwrap().holds());
        assert!(!toughness_verify(&named::petersen(), &rat(3, 2)).unwrap().holds());
    }

    #[test]
    fn matching_examples() {
        match near_perfect_matching(&named::cycle(4)).unwrap() {
            MatchingResult::PerfectMatching(m) => assert_eq!(m.len(), 2),
            other => panic!("unexpected {other:?}"),
        }
        match near_perfect_matching(&named::cycle(5)).unwrap() {
            MatchingResult::NearPerfect(per) => {
                assert_eq!(per.len(), 5);
                assert!(per.iter().all(|(_, m)| m.len() == 2));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(near_perfect_matching(&named::star(3)).unwrap(), MatchingResult::Neither);
    }

    #[test]
    fn packing_examples() {
        assert_eq!(tree_packing(&named::complete(4)).unwrap(), 2);
        assert_eq!(tree_packing(&named::cycle(4)).unwrap(), 1);
        assert_eq!(tree_packing(&named::path(5)).unwrap(), 1);
        assert_eq!(tree_packing(&named::complete(6)).unwrap(), 3);
        assert_eq!(tree_packing(&named::petersen()).unwrap(), 1);
        assert_eq!(tree_packing(&named::cube()).unwrap(), 1);
        assert!(tree_packing(&Graph::new(2, &[]).unwrap()).is_err());
    }

    /// Nash-Williams and Tutte: the packing number of a connected graph is the
    /// minimum over vertex partitions of crossing edges over (parts - 1).
    fn packing_by_partitions(g: &Graph) -> usize {
        let n = g.vertex_count();
        let mut best = usize::MAX;
        let mut labels = vec![0usize; n];
        fn rec(g: &Graph, i: usize, parts: usize, labels: &mut Vec<usize>, best: &mut usize) {
            if i == labels.len() {
                if parts >= 2 {
                    let cross = g.edges().iter().filter(|&&(u, v)| labels[u] != labels[v]).count();
                    *best = (*best).min(cross / (parts - 1));
                }
                return;
            }
            for l in 0..=parts {
                labels[i] = l;
                rec(g, i + 1, parts.max(l + 1), labels, best);
            }
        }
        rec(g, 0, 0, &mut labels, &mut best);
        best
    }

    #[test]
    fn packing_matches_partition_formula() {
        for g in super::super::generate::connected_graphs_with_edges(7) {
            if g.vertex_count() <= 7 {
                assert_eq!(tree_packing(&g).unwrap(), packing_by_partitions(&g), "{g:?}");
            }
        }
        for g in [named::complete(5), named::prism(), named::complete_bipartite(3, 3), named::diamond()] {
            assert_eq!(tree_packing(&g).unwrap(), packing_by_partitions(&g), "{g:?}");
        }
    }
}
