//! Uniform density of graphs through their cycle matroids.

use std::error::Error;

use udm::graphic::{
    component_growth_check, is_strictly_uniformly_dense_graph, is_uniformly_dense_graph, named, structural_screen,
    CheckMode, Graph,
};
use udm::matroid::ScanOptions;

fn main() -> Result<(), Box<dyn Error>> {
    let options = ScanOptions::default();
    let graphs: Vec<(&str, Graph)> = vec![
        ("C4", named::cycle(4)),
        ("K4", named::complete(4)),
        ("cube", named::cube()),
        ("petersen", named::petersen()),
        ("tadpole", named::tadpole()),
        ("diamond", named::diamond()),
        ("K3,3", named::complete_bipartite(3, 3)),
    ];
    for (name, g) in &graphs {
        let cert = is_strictly_uniformly_dense_graph(g, CheckMode::Auto, &options)?;
        let screen = structural_screen(g)?;
        let violator = cert.violator.map(|v| format!("{} ({})", v.subset, v.density)).unwrap_or_default();
        println!(
            "{name:<9} m={:<2} density={:<5} screen={:<5} {:<26} {violator}",
            g.edge_count(),
            cert.density.to_string(),
            screen.passes(),
            cert.verdict.to_string(),
        );
    }

    // 29 edges: too many for exhaustive search, so vertex sets are scanned instead.
    let g = named::clique_and_cycle();
    let cert = is_uniformly_dense_graph(&g, CheckMode::Vertex, &options)?;
    let v = cert.violator.expect("the clique is denser than the whole graph");
    println!("clique_and_cycle: {} with densest edge set {} of density {}", cert.verdict, v.subset, v.density);

    let grown = component_growth_check(&named::theta(2, 3, 6), &options)?;
    println!("theta(2,3,6) by component growth: {}", grown.verdict);
    Ok(())
}
