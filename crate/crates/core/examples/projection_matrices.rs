//! Orthogonal projectors of representations and their principal minors.

use std::error::Error;

use num_traits::Zero;
use udm::linalg::QMatrix;
use udm::matroid::{for_each_k_subset, Subset};
use udm::representable::{
    constant_diag_projection, matroid_from_matrix, matroid_from_projection, principal_rank_bounds, projection,
    ConstantDiagonal, ScalingOptions,
};

fn main() -> Result<(), Box<dyn Error>> {
    let x = QMatrix::from_i64(3, 5, &[-1, 1, 0, 0, 1, 0, -1, 1, 0, 0, 0, 0, -1, -1, -1]);
    let t = projection(&x)?;
    let exact = t.exact_entries().expect("rational projector");
    for r in 0..exact.rows() {
        let row: Vec<String> = exact.row(r).iter().map(|q| format!("{q:>5}")).collect();
        println!("  {}", row.join(" "));
    }
    println!("projection: {}, trace {}", t.is_projection(), t.trace_exact().expect("exact"));
    println!("same matroid as X: {}", matroid_from_projection(&t)? == matroid_from_matrix(&x)?);

    let mut vanishing = Vec::new();
    for_each_k_subset(5, 3, |mask| {
        let idx = Subset::from_mask(mask).indices();
        if t.principal_det_exact(&idx).is_some_and(|d| d.is_zero()) {
            vanishing.push(Subset::from_mask(mask));
        }
    });
    println!("vanishing 3x3 principal minors: {vanishing:?}");

    if let ConstantDiagonal::Projection { matrix, .. } = constant_diag_projection(&x, &ScalingOptions::default())? {
        let diag: Vec<String> = matrix.diagonal_exact().expect("exact").iter().map(|q| q.to_string()).collect();
        println!("scaled diagonal [{}]", diag.join(", "));
        println!("principal rank bounds: {:?}", principal_rank_bounds(&matrix)?);
    }
    Ok(())
}
