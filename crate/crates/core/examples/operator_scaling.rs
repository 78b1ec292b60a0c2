//! Column scaling of a real representation towards a constant projector diagonal.

use std::error::Error;

use udm::graphic::named;
use udm::linalg::QMatrix;
use udm::representable::{determinantal_measure_scaled, operator_scale, ScalingOptions, ScalingStatus};

fn scale(name: &str, x: &QMatrix) -> Result<(), Box<dyn Error>> {
    let result = operator_scale(x, &ScalingOptions::default())?;
    print!("{name}: {} after {} iterations, deviation {:.1e}", result.verdict(), result.iterations, result.deviation);
    match result.status {
        ScalingStatus::Converged { weights, exact_weights } => {
            println!();
            println!("  weights {weights:.6?}");
            if let Some(w) = exact_weights {
                let labels: Vec<String> = w.iter().map(|q| q.to_string()).collect();
                println!("  exact weights [{}]", labels.join(", "));
                let mu = determinantal_measure_scaled(x, Some(&w))?;
                println!("  scaled determinantal measure {}", mu.normalized().describe());
            }
        }
        ScalingStatus::Violated(v) => println!(", {} is denser than the ground set", v.subset),
        ScalingStatus::Boundary(v) => println!(", {} attains the density", v.subset),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    let diamond = QMatrix::from_i64(3, 5, &[-1, 1, 0, 0, 1, 0, -1, 1, 0, 0, 0, 0, -1, -1, -1]);
    scale("diamond", &diamond)?;
    scale("K4", &named::complete(4).reduced_incidence_matrix()?)?;
    scale("tadpole", &named::tadpole().reduced_incidence_matrix()?)?;
    scale("coloop", &QMatrix::from_i64(2, 3, &[1, 1, 0, 0, 0, 1]))?;
    Ok(())
}
