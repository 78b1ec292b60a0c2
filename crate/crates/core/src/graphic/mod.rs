//! Simple graphs and their cycle matroids.

mod connectivity;
mod density;
pub mod generate;
pub mod named;
mod structure;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::linalg::{int, usize_rat, QMatrix, Rational};
use crate::matroid::{Matroid, Subset};

pub use connectivity::{disjoint_forests, near_perfect_matching, perfect_matching, toughness_verify, tree_packing, MatchingResult, Toughness};
pub use density::{
    component_growth_check, edge_blocks, is_strictly_uniformly_dense_graph, is_uniformly_dense_graph,
    CheckMode,
};
pub use structure::{classify_bicyclic, structural_screen, BicyclicClass, NotBicyclicReason, ScreenReport};

pub const DEFAULT_VERTEX_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("edge {index} joins vertex {vertex} to itself")]
    SelfLoop { index: usize, vertex: usize },
    #[error("edge {index} repeats the pair ({u}, {v})")]
    DuplicateEdge { index: usize, u: usize, v: usize },
    #[error("edge {index} uses vertex {vertex}, but there are only {n} vertices")]
    VertexOutOfRange { index: usize, vertex: usize, n: usize },
    #[error("the graph has no edges")]
    EmptyEdgeSet,
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error("the graph has {count} spanning forests, above the cap {cap}")]
    TooManyBases { count: String, cap: usize },
    #[error("operand has isolated vertex {0}")]
    IsolatedVertex(usize),
    #[error(transparent)]
    Matroid(#[from] crate::matroid::MatroidError),
    #[error(transparent)]
    Scaling(#[from] crate::representable::RepresentationError),
}

/// Simple undirected graph; edge `i` is `edges[i]` with the smaller endpoint first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(edges.len());
        for (index, &(u, v)) in edges.iter().enumerate() {
            for vertex in [u, v] {
                if vertex >= n {
                    return Err(GraphError::VertexOutOfRange { index, vertex, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { index, vertex: u });
            }
            let e = (u.min(v), u.max(v));
            if !seen.insert(e) {
                return Err(GraphError::DuplicateEdge { index, u: e.0, v: e.1 });
            }
            out.push(e);
        }
        Ok(Graph { n, edges: out })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn all_edges(&self) -> Subset {
        assert!(self.edges.len() <= 64, "edge subsets need at most 64 edges");
        Subset::full(self.edges.len())
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.n];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        adj
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        self.edges.iter().position(|&e| e == (u.min(v), u.max(v)))
    }

    pub fn is_regular(&self) -> bool {
        let d = self.degrees();
        d.windows(2).all(|w| w[0] == w[1])
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || components_of(self.n, self.edges.iter().copied()) == 1
    }

    /// Number of components of `(V, A)`.
    pub fn components(&self, a: Subset) -> usize {
        components_of(self.n, a.iter().map(|i| self.edges[i]))
    }

    /// Cyclomatic number `|A| - rank(A)`.
    pub fn betti(&self, a: Subset) -> usize {
        a.len() - self.rank(a)
    }

    pub fn rank(&self, a: Subset) -> usize {
        self.n - self.components(a)
    }

    pub fn full_rank(&self) -> usize {
        self.n - components_of(self.n, self.edges.iter().copied())
    }

    pub fn is_forest(&self, a: Subset) -> bool {
        self.rank(a) == a.len()
    }

    /// `G|A`: the edges of `a` with isolated vertices removed, relabelled in order.
    pub fn edge_subgraph(&self, a: Subset) -> Graph {
        let mut used = vec![false; self.n];
        for i in a.iter() {
            let (u, v) = self.edges[i];
            used[u] = true;
            used[v] = true;
        }
        let mut index = vec![usize::MAX; self.n];
        let mut next = 0;
        for (v, &u) in used.iter().enumerate() {
            if u {
                index[v] = next;
                next += 1;
            }
        }
        let edges = a.iter().map(|i| (index[self.edges[i].0], index[self.edges[i].1])).collect();
        Graph { n: next, edges }
    }

    /// The graph with isolated vertices dropped.
    pub fn without_isolated(&self) -> Graph {
        self.edge_subgraph(Subset::full(self.edges.len()))
    }

    /// Induced subgraph on the listed vertices, relabelled in the given order.
    pub fn induced(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            index[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| index[*u] != usize::MAX && index[*v] != usize::MAX)
            .map(|&(u, v)| {
                let (a, b) = (index[u], index[v]);
                (a.min(b), a.max(b))
            })
            .collect();
        Graph { n: keep.len(), edges }
    }

    /// Spanning-forest count by the matrix-tree theorem.
    pub fn spanning_forest_count(&self) -> BigInt {
        let lap = self.laplacian();
        let keep = self.non_root_vertices();
        let det = lap.principal(&keep).det();
        det.to_integer()
    }

    pub(crate) fn laplacian(&self) -> QMatrix {
        let mut l = QMatrix::zeros(self.n, self.n);
        for &(u, v) in &self.edges {
            for (a, b) in [(u, v), (v, u)] {
                let d = l.get(a, a) + int(1);
                l.set(a, a, d);
                let o = l.get(a, b) - int(1);
                l.set(a, b, o);
            }
        }
        l
    }

    /// Vertices other than the lowest-index vertex of each component.
    fn non_root_vertices(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.n);
        for &(u, v) in &self.edges {
            uf.union(u, v);
        }
        let mut seen_root = vec![false; self.n];
        let mut keep = Vec::new();
        for v in 0..self.n {
            let r = uf.find(v);
            if seen_root[r] {
                keep.push(v);
            } else {
                seen_root[r] = true;
            }
        }
        keep
    }

    /// Signed incidence matrix with the lowest vertex of each component deleted.
    ///
    /// Edge `{u, v}` with `u < v` has `+1` in row `u` and `-1` in row `v`.
    pub fn reduced_incidence_matrix(&self) -> Result<QMatrix, GraphError> {
        if self.edges.is_empty() {
            return Err(GraphError::EmptyEdgeSet);
        }
        let rows = self.non_root_vertices();
        let mut row_of = vec![usize::MAX; self.n];
        for (i, &v) in rows.iter().enumerate() {
            row_of[v] = i;
        }
        let mut x = QMatrix::zeros(rows.len(), self.edges.len());
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            if row_of[u] != usize::MAX {
                x.set(row_of[u], j, int(1));
            }
            if row_of[v] != usize::MAX {
                x.set(row_of[v], j, int(-1));
            }
        }
        Ok(x)
    }

    /// Full signed incidence matrix (vertices by edges), same orientation.
    pub fn incidence_matrix(&self) -> QMatrix {
        let mut x = QMatrix::zeros(self.n, self.edges.len());
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            x.set(u, j, int(1));
            x.set(v, j, int(-1));
        }
        x
    }

    pub fn density(&self) -> Result<Rational, GraphError> {
        graph_density(self)
    }
}

/// `|E| / rank(G)`.
pub fn graph_density(g: &Graph) -> Result<Rational, GraphError> {
    if g.edge_count() == 0 {
        return Err(GraphError::EmptyEdgeSet);
    }
    Ok(usize_rat(g.edge_count()) / usize_rat(g.full_rank()))
}

pub fn components(g: &Graph, a: Subset) -> usize {
    g.components(a)
}

pub fn betti(g: &Graph, a: Subset) -> usize {
    g.betti(a)
}

pub const DEFAULT_FOREST_CAP: usize = 100_000;

pub fn cycle_matroid(g: &Graph) -> Result<Matroid, GraphError> {
    cycle_matroid_with(g, DEFAULT_FOREST_CAP)
}

/// Spanning forests by contraction-deletion, checked against the matrix-tree count.
pub fn cycle_matroid_with(g: &Graph, cap: usize) -> Result<Matroid, GraphError> {
    let m = g.edge_count();
    if m > crate::matroid::MAX_GROUND_SIZE {
        return Err(GraphError::CapExceeded { what: "edge set", size: m, cap: crate::matroid::MAX_GROUND_SIZE });
    }
    let expected = g.spanning_forest_count();
    if expected.to_usize().is_none_or(|c| c > cap) {
        return Err(GraphError::TooManyBases { count: expected.to_string(), cap });
    }
    let target = g.full_rank();
    let mut out = Vec::new();
    let mut uf = UnionFind::new(g.n);
    forests(g, 0, 0, target, &mut uf, &mut out);
    assert_eq!(BigInt::from(out.len()), expected, "forest enumeration disagrees with the matrix-tree count");
    Ok(Matroid::from_masks_unchecked(m, out))
}

fn forests(g: &Graph, i: usize, chosen: u64, target: usize, uf: &mut UnionFind, out: &mut Vec<u64>) {
    let size = chosen.count_ones() as usize;
    if size == target {
        out.push(chosen);
        return;
    }
    if i == g.edges.len() {
        return;
    }
    let (u, v) = g.edges[i];
    if uf.find(u) != uf.find(v) {
        // Contract edge i.
        let mut contracted = uf.clone();
        contracted.union(u, v);
        forests(g, i + 1, chosen | 1 << i, target, &mut contracted, out);
    }
    // Delete edge i, if the remaining edges can still reach full rank.
    let mut probe = uf.clone();
    let mut rank = size;
    for &(a, b) in &g.edges[i + 1..] {
        if probe.union(a, b) {
            rank += 1;
        }
    }
    if rank >= target {
        forests(g, i + 1, chosen, target, uf, out);
    }
}

pub(crate) fn components_of(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut uf = UnionFind::new(n);
    let mut c = n;
    for (u, v) in edges {
        if uf.union(u, v) {
            c -= 1;
        }
    }
    c
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns true when the two classes were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        self.parent[hi] = lo;
        true
    }
}
