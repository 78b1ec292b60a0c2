//! Small named graphs used throughout the examples and tests.

use super::Graph;
use crate::matroid::Subset;

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::new(n, edges).expect("named graphs are simple")
}

/// Path on `n` vertices (a tree with `n - 1` edges).
pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build(n, &edges)
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, &edges)
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v));
        }
    }
    build(n, &edges)
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..a {
        for v in 0..b {
            edges.push((u, a + v));
        }
    }
    build(a + b, &edges)
}

/// Star with `leaves` leaves around vertex 0.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    build(leaves + 1, &edges)
}

/// The 3-cube.
pub fn cube() -> Graph {
    let mut edges = Vec::new();
    for u in 0..8usize {
        for bit in 0..3 {
            let v = u ^ (1 << bit);
            if u < v {
                edges.push((u, v));
            }
        }
    }
    build(8, &edges)
}

pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    build(10, &edges)
}

/// Triangular prism.
pub fn prism() -> Graph {
    build(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
}

/// Triangle 1-2-3 with pendant edge 0-3; edge 0 is a bridge.
pub fn tadpole() -> Graph {
    build(4, &[(0, 3), (0, 1), (1, 2), (0, 2)])
}

/// Four vertices, five edges; the triangles are edges {0,1,4} and {2,3,4}.
pub fn diamond() -> Graph {
    build(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
}

/// The same graph as [`diamond`] with the diagonal on 1-3; triangles {0,3,4} and {1,2,4}.
pub fn diamond_other_chord() -> Graph {
    build(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (1, 3)])
}

/// Two junctions joined by three internally disjoint paths of the given lengths.
///
/// A zero length identifies the junctions, giving two cycles through one vertex.
pub fn theta(l1: usize, l2: usize, l3: usize) -> Graph {
    let mut lengths = [l1, l2, l3];
    lengths.sort_unstable();
    let mut edges = Vec::new();
    let mut n;
    if lengths[0] == 0 {
        n = 1;
        for &len in &lengths[1..] {
            assert!(len >= 3, "a cycle needs at least three edges");
            let mut prev = 0;
            for _ in 1..len {
                edges.push((prev, n));
                prev = n;
                n += 1;
            }
            edges.push((prev, 0));
        }
    } else {
        assert!(lengths[1] >= 2, "at most one path may be a single edge");
        n = 2;
        for &len in &lengths {
            let mut prev = 0;
            for _ in 1..len {
                edges.push((prev, n));
                prev = n;
                n += 1;
            }
            edges.push((prev, 1));
        }
    }
    build(n, &edges)
}

/// `K5` on vertices 0..5 sharing the edge 0-1 with a 20-cycle.
pub fn clique_and_cycle() -> Graph {
    let mut edges = Vec::new();
    for u in 0..5 {
        for v in u + 1..5 {
            edges.push((u, v));
        }
    }
    let mut prev = 1;
    for v in 5..23 {
        edges.push((prev, v));
        prev = v;
    }
    edges.push((prev, 0));
    build(23, &edges)
}

/// Edge indices of the `K5` inside [`clique_and_cycle`].
pub fn clique_and_cycle_k5() -> Subset {
    Subset::full(10)
}
