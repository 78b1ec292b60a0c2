//! Laplacian spectra and the eigenvalue bounds tied to uniform density.

use std::error::Error;

use udm::graphic::named;
use udm::matroid::ScanOptions;
use udm::spectral::{
    edge_laplacian, lambda_max, lambda_max_bounds, laplacian_spectrum, nullity, spectral_ud_check, stable_bound,
    SpectralVerdict, SubsetSelection, DEFAULT_SAMPLE_SEED,
};

fn main() -> Result<(), Box<dyn Error>> {
    let options = ScanOptions::default();
    let k4 = named::complete(4);
    println!("K4 spectrum {:?}", laplacian_spectrum(&k4)?.eigenvalues);
    println!("K4 edge-Laplacian nullity {}", nullity(&edge_laplacian(&k4)?));

    for (name, g) in [("cube", named::cube()), ("tadpole", named::tadpole()), ("diamond", named::diamond())] {
        let report = lambda_max_bounds(&g, SubsetSelection::All, &options)?;
        let check = spectral_ud_check(&g, &options)?;
        let verdict = match check.verdict {
            SpectralVerdict::ConsistentUd => "consistent with uniform density".to_string(),
            SpectralVerdict::Violation(v) => format!("violated on {}", v.subset),
        };
        println!(
            "{name:<8} lambda_max={:.6} 2/rho={:.6} stable holds={} {verdict}",
            report.lambda_max,
            report.global.rhs,
            report.stable.holds()
        );
    }

    // Too many edges for a full subset scan: sample, then test the clique directly.
    let g = named::clique_and_cycle();
    let sampled = lambda_max_bounds(&g, SubsetSelection::Sample { count: 200, seed: DEFAULT_SAMPLE_SEED }, &options)?;
    let clique = stable_bound(&g, named::clique_and_cycle_k5())?;
    println!(
        "clique_and_cycle lambda_max={:.6}, clique restriction {:.6} vs {:.6}, holds={}",
        lambda_max(&g)?,
        clique.lhs,
        clique.rhs,
        clique.holds()
    );
    println!("sampled violations: {:?}", sampled.violations());
    Ok(())
}
