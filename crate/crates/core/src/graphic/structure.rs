use std::collections::VecDeque;

use num_traits::One;

use super::{Graph, GraphError};
use crate::linalg::{usize_rat, Rational};

/// Outcome of the cheap necessary conditions for uniform density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScreenReport {
    pub density: Rational,
    /// Minimum degree over non-isolated vertices.
    pub min_degree: usize,
    pub clique_number: usize,
    /// `None` for forests.
    pub girth: Option<usize>,
    pub min_degree_ok: bool,
    pub clique_ok: bool,
    pub girth_ok: bool,
}

impl ScreenReport {
    pub fn passes(&self) -> bool {
        self.min_degree_ok && self.clique_ok && self.girth_ok
    }
}

pub fn structural_screen(g: &Graph) -> Result<ScreenReport, GraphError> {
    let density = super::graph_density(g)?;
    let min_degree = g.degrees().into_iter().filter(|&d| d > 0).min().unwrap_or(0);
    let clique_number = clique_number(g);
    let girth = girth(g);
    let min_degree_ok = usize_rat(min_degree) >= density;
    let clique_ok = usize_rat(clique_number) <= usize_rat(2) * &density;
    // girth * (rho - 1) >= rho; vacuous for forests.
    let girth_ok = match girth {
        None => true,
        Some(l) => usize_rat(l) * (&density - Rational::one()) >= density,
    };
    Ok(ScreenReport { density, min_degree, clique_number, girth, min_degree_ok, clique_ok, girth_ok })
}

/// Largest clique by Bron-Kerbosch with pivoting.
pub fn clique_number(g: &Graph) -> usize {
    let adj: Vec<Vec<bool>> = {
        let mut a = vec![vec![false; g.vertex_count()]; g.vertex_count()];
        for &(u, v) in g.edges() {
            a[u][v] = true;
            a[v][u] = true;
        }
        a
    };
    fn expand(adj: &[Vec<bool>], size: usize, p: Vec<usize>, x: Vec<usize>, best: &mut usize) {
        if p.is_empty() {
            if x.is_empty() {
                *best = (*best).max(size);
            }
            return;
        }
        if size + p.len() <= *best {
            return;
        }
        let pivot = p
            .iter()
            .chain(&x)
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&v| adj[u][v]).count())
            .expect("p is nonempty");
        let mut p = p;
        let mut x = x;
        let candidates: Vec<usize> = p.iter().copied().filter(|&v| !adj[pivot][v]).collect();
        for v in candidates {
            let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
            let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
            expand(adj, size + 1, np, nx, best);
            p.retain(|&w| w != v);
            x.push(v);
        }
    }
    let mut best = usize::from(g.vertex_count() > 0);
    expand(&adj, 0, (0..g.vertex_count()).collect(), Vec::new(), &mut best);
    best
}

/// Length of a shortest cycle, by breadth-first search from every vertex.
pub fn girth(g: &Graph) -> Option<usize> {
    let adj = g.adjacency();
    let n = g.vertex_count();
    let mut best: Option<usize> = None;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    queue.push_back(v);
                } else if parent[u] != v {
                    let len = dist[u] + dist[v] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NotBicyclicReason {
    Disconnected,
    /// The cyclomatic number differs from two.
    Betti(usize),
    /// A bridge; a graph with a bridge is not uniformly dense unless it is a tree.
    CutEdge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BicyclicClass {
    UniformlyDense([usize; 3]),
    NotUniformlyDense([usize; 3]),
    NotBicyclic(NotBicyclicReason),
}

impl BicyclicClass {
    pub fn lengths(&self) -> Option<[usize; 3]> {
        match self {
            BicyclicClass::UniformlyDense(l) | BicyclicClass::NotUniformlyDense(l) => Some(*l),
            BicyclicClass::NotBicyclic(_) => None,
        }
    }
}

/// Classifies connected graphs with cyclomatic number two.
///
/// Isolated vertices are ignored. The sorted path lengths `L1 <= L2 <= L3`
/// give a uniformly dense graph exactly when `L3 - L2 <= L1`.
pub fn classify_bicyclic(g: &Graph) -> BicyclicClass {
    let h = g.without_isolated();
    if !h.is_connected() || h.edge_count() == 0 {
        return BicyclicClass::NotBicyclic(NotBicyclicReason::Disconnected);
    }
    let beta = h.edge_count() + 1 - h.vertex_count();
    if beta != 2 {
        return BicyclicClass::NotBicyclic(NotBicyclicReason::Betti(beta));
    }
    if let Some(e) = bridges(g).into_iter().next() {
        return BicyclicClass::NotBicyclic(NotBicyclicReason::CutEdge(e));
    }
    let adj = h.adjacency();
    let junctions: Vec<usize> = (0..h.vertex_count()).filter(|&v| adj[v].len() >= 3).collect();
    let mut lengths: Vec<usize> = Vec::new();
    let walk = |start: usize, first: usize| -> (usize, usize) {
        let (mut prev, mut cur, mut len) = (start, first, 1);
        while adj[cur].len() == 2 {
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
            len += 1;
        }
        (cur, len)
    };
    match junctions.as_slice() {
        [a, _] => {
            for &first in &adj[*a] {
                lengths.push(walk(*a, first).1);
            }
        }
        [a] => {
            // Each cycle is walked twice, once from each end.
            let mut cycles: Vec<usize> = adj[*a].iter().map(|&f| walk(*a, f).1).collect();
            cycles.sort_unstable();
            lengths = vec![0, cycles[0], cycles[2]];
        }
        _ => unreachable!("bridgeless graphs with cyclomatic number two have one or two junctions"),
    }
    lengths.sort_unstable();
    let l = [lengths[0], lengths[1], lengths[2]];
    if l[2] - l[1] <= l[0] {
        BicyclicClass::UniformlyDense(l)
    } else {
        BicyclicClass::NotUniformlyDense(l)
    }
}

/// Bridge edge indices in increasing order.
pub fn bridges(g: &Graph) -> Vec<usize> {
    let all = g.all_edges();
    let c = g.components(all);
    (0..g.edge_count()).filter(|&e| g.components(all.without(e)) > c).collect()
}

#[cfg(test)]
mod tests {
    use super::super::named;
    use super::*;

    #[test]
    fn screens() {
        let t = structural_screen(&named::tadpole()).unwrap();
        assert_eq!(t.min_degree, 1);
        assert!(!t.min_degree_ok);
        assert!(!t.passes());
        let k4 = structural_screen(&named::complete(4)).unwrap();
        assert_eq!((k4.min_degree, k4.clique_number, k4.girth), (3, 4, Some(3)));
        assert!(k4.passes());
        let tree = structural_screen(&named::path(6)).unwrap();
        assert_eq!(tree.girth, None);
        assert!(tree.passes());
    }

    #[test]
    fn cliques_and_girth() {
        assert_eq!(clique_number(&named::petersen()), 2);
        assert_eq!(girth(&named::petersen()), Some(5));
        assert_eq!(clique_number(&named::clique_and_cycle()), 5);
        assert_eq!(girth(&named::cube()), Some(4));
        assert_eq!(girth(&named::cycle(7)), Some(7));
        assert_eq!(clique_number(&Graph::new(3, &[]).unwrap()), 1);
    }

    #[test]
    fn bicyclic_examples() {
        assert_eq!(classify_bicyclic(&named::theta(0, 4, 4)), BicyclicClass::UniformlyDense([0, 4, 4]));
        assert_eq!(classify_bicyclic(&named::theta(3, 3, 6)), BicyclicClass::UniformlyDense([3, 3, 6]));
        assert_eq!(classify_bicyclic(&named::theta(2, 3, 6)), BicyclicClass::NotUniformlyDense([2, 3, 6]));
        assert_eq!(classify_bicyclic(&named::diamond()), BicyclicClass::UniformlyDense([1, 2, 2]));
        assert_eq!(classify_bicyclic(&named::complete(4)), BicyclicClass::NotBicyclic(NotBicyclicReason::Betti(3)));
    }

    #[test]
    fn dumbbell_has_a_cut_edge() {
        let g = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(classify_bicyclic(&g), BicyclicClass::NotBicyclic(NotBicyclicReason::CutEdge(3)));
        let two = Graph::new(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(classify_bicyclic(&two), BicyclicClass::NotBicyclic(NotBicyclicReason::Disconnected));
    }
}
