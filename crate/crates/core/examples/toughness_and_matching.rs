//! Toughness, perfect matchings and spanning tree packing.

use std::error::Error;

use udm::graphic::{
    graph_density, is_uniformly_dense_graph, named, near_perfect_matching, toughness_verify, tree_packing, CheckMode,
    MatchingResult, Toughness,
};
use udm::linalg::Rational;
use udm::matroid::ScanOptions;

fn main() -> Result<(), Box<dyn Error>> {
    for (name, g) in [
        ("petersen", named::petersen()),
        ("cube", named::cube()),
        ("prism", named::prism()),
        ("K5", named::complete(5)),
        ("tadpole", named::tadpole()),
    ] {
        let ud = is_uniformly_dense_graph(&g, CheckMode::Auto, &ScanOptions::default())?.verdict.is_uniformly_dense();
        let rho = graph_density(&g)?;
        let t = &rho / Rational::from_integer(g.max_degree().into());
        let tough = match toughness_verify(&g, &t)? {
            Toughness::Holds => "holds".to_string(),
            Toughness::Counterexample { removed, components } => format!("fails: {removed:?} leaves {components}"),
        };
        let matching = match near_perfect_matching(&g)? {
            MatchingResult::PerfectMatching(edges) => format!("perfect ({} edges)", edges.len()),
            MatchingResult::NearPerfect(_) => "near-perfect".to_string(),
            MatchingResult::Neither => "none".to_string(),
        };
        println!(
            "{name:<9} ud={ud:<5} {t}-tough {tough:<22} matching {matching:<20} trees {}",
            tree_packing(&g)?
        );
    }
    Ok(())
}
