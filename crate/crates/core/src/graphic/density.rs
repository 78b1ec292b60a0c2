use super::{Graph, GraphError, UnionFind};
use crate::matroid::{
    better, merge, verdict_certificate, Candidate, Certificate, Density, ScanOptions, Subset, Tracker,
};
use crate::representable::{scaling_certificate, ScalingOptions};

/// How a graph is checked for uniform density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    /// Every edge subset (edge count within the subset cap).
    Exhaustive,
    /// Every connected vertex set, scoring its induced edges (vertex count within the cap).
    Vertex,
    /// Operator scaling on the reduced incidence matrix.
    Scaling,
    /// Exhaustive when the edges fit the cap, otherwise vertex mode, otherwise scaling.
    Auto,
}

impl CheckMode {
    pub fn parse(text: &str) -> Option<Self> {
        match text {
            "exhaustive" => Some(CheckMode::Exhaustive),
            "vertex" => Some(CheckMode::Vertex),
            "scaling" => Some(CheckMode::Scaling),
            "auto" => Some(CheckMode::Auto),
            _ => None,
        }
    }
}

pub fn is_uniformly_dense_graph(g: &Graph, mode: CheckMode, options: &ScanOptions) -> Result<Certificate, GraphError> {
    check_graph(g, mode, false, options)
}

pub fn is_strictly_uniformly_dense_graph(
    g: &Graph,
    mode: CheckMode,
    options: &ScanOptions,
) -> Result<Certificate, GraphError> {
    check_graph(g, mode, true, options)
}

fn check_graph(g: &Graph, mode: CheckMode, strict: bool, options: &ScanOptions) -> Result<Certificate, GraphError> {
    if g.edge_count() == 0 {
        return Err(GraphError::EmptyEdgeSet);
    }
    let h = g.without_isolated();
    let mode = match mode {
        CheckMode::Auto if h.edge_count() <= options.subset_cap => CheckMode::Exhaustive,
        CheckMode::Auto if h.vertex_count() <= options.subset_cap && h.edge_count() <= 64 => CheckMode::Vertex,
        CheckMode::Auto => CheckMode::Scaling,
        other => other,
    };
    let density = Density::of(h.edge_count(), h.full_rank());
    match mode {
        CheckMode::Exhaustive => {
            let m = h.edge_count();
            options.check(m)?;
            let blocks = if strict { Some(masks(&edge_blocks(&h))) } else { None };
            let edges = h.edges().to_vec();
            let parts = crate::parallel::chunked(1u64 << m, options.threads, |lo, hi| {
                let mut t = Tracker::new(m, h.full_rank(), blocks.as_deref());
                for mask in lo..hi {
                    t.offer(mask, mask.count_ones() as usize, forest_rank(&edges, mask));
                }
                t
            });
            Ok(finish(density, parts, m, h.full_rank(), blocks.as_deref(), strict))
        }
        CheckMode::Vertex => {
            let n = h.vertex_count();
            let cap = options.subset_cap.min(40);
            if n > cap {
                return Err(GraphError::CapExceeded { what: "vertex set", size: n, cap });
            }
            if h.edge_count() > 64 {
                return Err(GraphError::CapExceeded { what: "edge set", size: h.edge_count(), cap: 64 });
            }
            let m = h.edge_count();
            let blocks = if strict { Some(masks(&edge_blocks(&h))) } else { None };
            let edges = h.edges().to_vec();
            let parts = crate::parallel::chunked(1u64 << n, options.threads, |lo, hi| {
                let mut t = Tracker::new(m, h.full_rank(), blocks.as_deref());
                for vmask in lo..hi {
                    let size = vmask.count_ones() as usize;
                    if size < 2 {
                        continue;
                    }
                    let mut emask = 0u64;
                    for (i, &(u, v)) in edges.iter().enumerate() {
                        if vmask >> u & 1 == 1 && vmask >> v & 1 == 1 {
                            emask |= 1 << i;
                        }
                    }
                    if emask.count_ones() as usize + 1 < size {
                        continue;
                    }
                    let rank = forest_rank(&edges, emask);
                    if rank + 1 == size {
                        t.offer(emask, emask.count_ones() as usize, rank);
                    }
                }
                t
            });
            Ok(finish(density, parts, m, h.full_rank(), blocks.as_deref(), strict))
        }
        CheckMode::Scaling => {
            let x = h.reduced_incidence_matrix()?;
            let mut cert = scaling_certificate(&x, &ScalingOptions::default(), options)?;
            if !strict && cert.verdict.is_uniformly_dense() {
                cert.verdict = crate::matroid::Verdict::UniformlyDense;
                cert.violator = None;
            }
            Ok(cert)
        }
        CheckMode::Auto => unreachable!(),
    }
}

fn finish(
    density: Density,
    parts: Vec<Tracker<'_>>,
    m: usize,
    rank: usize,
    blocks: Option<&[u64]>,
    strict: bool,
) -> Certificate {
    let mut total = Tracker::new(m, rank, blocks);
    for p in parts {
        total.absorb(p);
    }
    verdict_certificate(density, total.finish(), strict)
}

fn masks(subsets: &[Subset]) -> Vec<u64> {
    subsets.iter().map(|s| s.mask()).collect()
}

/// Rank of an edge set, for graphs with at most 64 vertices in use.
fn forest_rank(edges: &[(usize, usize)], mask: u64) -> usize {
    let mut parent = [0u8; 128];
    for (i, p) in parent.iter_mut().enumerate() {
        *p = i as u8;
    }
    fn find(parent: &mut [u8; 128], mut x: usize) -> usize {
        while parent[x] as usize != x {
            let up = parent[parent[x] as usize];
            parent[x] = up;
            x = up as usize;
        }
        x
    }
    let mut rank = 0;
    let mut m = mask;
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        m &= m - 1;
        let (u, v) = edges[i];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b) as u8;
            rank += 1;
        }
    }
    rank
}

/// Components of the cycle matroid: edge sets of the blocks, bridges as singletons.
pub fn edge_blocks(g: &Graph) -> Vec<Subset> {
    let m = g.edge_count();
    let mut forest = UnionFind::new(g.vertex_count());
    let mut tree = Vec::new();
    let mut extra = Vec::new();
    for (i, &(u, v)) in g.edges().iter().enumerate() {
        if forest.union(u, v) {
            tree.push(i);
        } else {
            extra.push(i);
        }
    }
    let mut groups = UnionFind::new(m);
    let tree_graph = Graph { n: g.vertex_count(), edges: tree.iter().map(|&i| g.edges()[i]).collect() };
    for &x in &extra {
        let (s, t) = g.edges()[x];
        for j in tree_path(&tree_graph, s, t) {
            groups.union(x, tree[j]);
        }
    }
    let mut out: Vec<u64> = vec![0; m];
    for e in 0..m {
        let r = groups.find(e);
        out[r] |= 1 << e;
    }
    out.into_iter().filter(|&b| b != 0).map(Subset::from_mask).collect()
}

fn tree_path(tree: &Graph, s: usize, t: usize) -> Vec<usize> {
    let mut via: Vec<Option<usize>> = vec![None; tree.vertex_count()];
    let mut seen = vec![false; tree.vertex_count()];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        for (e, &(a, b)) in tree.edges().iter().enumerate() {
            let w = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if !seen[w] {
                seen[w] = true;
                via[w] = Some(e);
                stack.push(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = t;
    while cur != s {
        let e = via[cur].expect("endpoints lie in one tree");
        path.push(e);
        let (a, b) = tree.edges()[e];
        cur = if a == cur { b } else { a };
    }
    path
}

/// The component-growth form: `c(E - A) - c(E) <= |A| / rho(G)` for every `A`.
///
/// A violating `A` certifies that its complement is denser than the graph; the
/// certificate reports that complement, chosen by the usual tie-break.
pub fn component_growth_check(g: &Graph, options: &ScanOptions) -> Result<Certificate, GraphError> {
    if g.edge_count() == 0 {
        return Err(GraphError::EmptyEdgeSet);
    }
    let m = g.edge_count();
    options.check(m)?;
    let n = g.vertex_count();
    let full = Subset::full(m);
    let base = g.components(full);
    let r = n - base;
    let parts = crate::parallel::chunked(1u64 << m, options.threads, |lo, hi| {
        let mut best: Option<Candidate> = None;
        // Chunks cover 1..2^m; shifting by one covers every A except A = E, which never violates.
        for a in lo - 1..hi - 1 {
            let rest = full.difference(Subset::from_mask(a));
            let size = a.count_ones() as usize;
            let grown = super::components_of(n, rest.iter().map(|i| g.edges()[i])) - base;
            if grown * m > size * r {
                let c = Candidate { mask: rest.mask(), size: m - size, rank: n - base - grown };
                merge(&mut best, c, better);
            }
        }
        best
    });
    let mut best = None;
    for c in parts.into_iter().flatten() {
        merge(&mut best, c, better);
    }
    let scan = crate::matroid::DensityScan {
        ground_rank: r,
        violator: best.map(|c| crate::matroid::Violator::new(Subset::from_mask(c.mask), c.rank)),
        boundary: None,
    };
    Ok(verdict_certificate(Density::of(m, r), scan, false))
}
