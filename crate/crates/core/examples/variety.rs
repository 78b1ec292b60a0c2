//! Plücker coordinates and membership in the strictly uniformly dense variety.

use std::error::Error;

use udm::linalg::{QMatrix, Rational};
use udm::representable::{
    constant_diag_projection, plucker, plucker_squares, projection, variety_membership, ConstantDiagonal,
    ScalingOptions, ScalingStatus, VarietyInput,
};

fn main() -> Result<(), Box<dyn Error>> {
    let x = QMatrix::from_i64(3, 5, &[-1, 1, 0, 0, 1, 0, -1, 1, 0, 0, 0, 0, -1, -1, -1]);
    let (k, n) = (x.rows(), x.cols());
    for (s, p) in plucker(&x)? {
        println!("  p{s} = {p}");
    }

    let values: Vec<Rational> = plucker(&x)?.into_iter().map(|(_, p)| p).collect();
    let raw = VarietyInput::Coordinates { n, k, values };
    println!("unscaled coordinates in variety: {}", variety_membership(&raw)?);
    println!("unscaled projector in variety: {}", variety_membership(&VarietyInput::Projection(projection(&x)?))?);

    if let ConstantDiagonal::Projection { matrix, scaling } = constant_diag_projection(&x, &ScalingOptions::default())? {
        if let ScalingStatus::Converged { exact_weights: Some(w), .. } = &scaling.status {
            let values = plucker_squares(&x, Some(w))?.into_iter().map(|(_, q)| q).collect();
            let squared = VarietyInput::SquaredCoordinates { n, k, values };
            println!("scaled squared coordinates in variety: {}", variety_membership(&squared)?);
        }
        println!("scaled projector in variety: {}", variety_membership(&VarietyInput::Projection(matrix))?);
    }
    Ok(())
}
