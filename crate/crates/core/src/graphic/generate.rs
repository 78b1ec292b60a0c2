//! Small graph families: all connected graphs by edge count, and seeded random graphs.

use std::collections::HashMap;

use petgraph::graph::UnGraph;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;

fn to_petgraph(g: &Graph) -> UnGraph<(), ()> {
    let edges: Vec<(u32, u32)> = g.edges().iter().map(|&(u, v)| (u as u32, v as u32)).collect();
    let mut pg = UnGraph::from_edges(&edges);
    while pg.node_count() < g.vertex_count() {
        pg.add_node(());
    }
    pg
}

fn invariant(g: &Graph) -> (usize, Vec<usize>) {
    let mut d = g.degrees();
    d.sort_unstable();
    (g.vertex_count(), d)
}

/// Keeps one graph per isomorphism class, in first-seen order.
pub fn dedupe_isomorphic(graphs: impl IntoIterator<Item = Graph>) -> Vec<Graph> {
    let mut buckets: HashMap<(usize, Vec<usize>), Vec<(usize, UnGraph<(), ()>)>> = HashMap::new();
    let mut out = Vec::new();
    for g in graphs {
        let pg = to_petgraph(&g);
        let bucket = buckets.entry(invariant(&g)).or_default();
        if bucket.iter().any(|(_, h)| petgraph::algo::is_isomorphic(&pg, h)) {
            continue;
        }
        bucket.push((out.len(), pg));
        out.push(g);
    }
    out
}

/// Connected graphs with exactly `m` edges and no isolated vertices, one per
/// isomorphism class. With `m = 0` the single vertex is returned.
pub fn connected_graphs_with_edges(m: usize) -> Vec<Graph> {
    let mut level = vec![Graph::new(1, &[]).expect("single vertex")];
    for _ in 0..m {
        let mut next = Vec::new();
        for g in &level {
            let n = g.vertex_count();
            for u in 0..n {
                for v in u + 1..n {
                    if !g.has_edge(u, v) {
                        next.push(with_edge(g, n, u, v));
                    }
                }
                next.push(with_edge(g, n + 1, u, n));
            }
        }
        level = dedupe_isomorphic(next);
    }
    level
}

/// All connected graphs with between one and `m` edges.
pub fn connected_graphs_up_to(m: usize) -> Vec<Graph> {
    (1..=m).flat_map(connected_graphs_with_edges).collect()
}

fn with_edge(g: &Graph, n: usize, u: usize, v: usize) -> Graph {
    let mut edges = g.edges().to_vec();
    edges.push((u, v));
    Graph::new(n, &edges).expect("simple graph")
}

/// Erdős–Rényi graph `G(n, p)` from a fixed seed.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges).expect("simple graph")
}

/// Connected graph on `n` vertices with `m` edges: a random spanning tree plus
/// uniformly chosen extra edges.
pub fn random_connected_graph(n: usize, m: usize, seed: u64) -> Graph {
    assert!(n >= 1 && m + 1 >= n && m <= n * (n - 1) / 2, "no connected graph with {n} vertices and {m} edges");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::with_capacity(m);
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (a, b) = (order[i], order[j]);
        edges.push((a.min(b), a.max(b)));
    }
    let mut rest: Vec<(usize, usize)> =
        (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|e| !edges.contains(e)).collect();
    rest.shuffle(&mut rng);
    edges.extend(rest.into_iter().take(m + 1 - n));
    Graph::new(n, &edges).expect("simple graph")
}
