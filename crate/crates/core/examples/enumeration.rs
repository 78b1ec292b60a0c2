//! Exhaustive enumeration of small matroids and connected graphs.

use std::error::Error;

use udm::graphic::generate::connected_graphs_with_edges;
use udm::graphic::{is_strictly_uniformly_dense_graph, CheckMode};
use udm::matroid::{is_strictly_uniformly_dense, non_isomorphic_matroids, ScanOptions};

fn main() -> Result<(), Box<dyn Error>> {
    println!(" n  matroids  uniformly dense  strict");
    for n in 1..=5 {
        let all = non_isomorphic_matroids(n);
        let (mut ud, mut strict) = (0, 0);
        for m in &all {
            let v = is_strictly_uniformly_dense(m)?.verdict;
            ud += usize::from(v.is_uniformly_dense());
            strict += usize::from(v.is_strict());
        }
        println!("{n:>2}  {:>8}  {ud:>15}  {strict:>6}", all.len());
    }

    println!(" m  connected graphs  strictly uniformly dense");
    for m in 1..=7 {
        let graphs = connected_graphs_with_edges(m);
        let mut strict = 0;
        for g in &graphs {
            let cert = is_strictly_uniformly_dense_graph(g, CheckMode::Exhaustive, &ScanOptions::default())?;
            strict += usize::from(cert.verdict.is_strict());
        }
        println!("{m:>2}  {:>16}  {strict:>24}", graphs.len());
    }
    Ok(())
}
