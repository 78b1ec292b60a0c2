//! Matroids represented by real matrices.
//!
//! Inputs are exact rational `k x n` matrices. Scaled matrices `X diag(sqrt(w))`
//! are carried as the pair `(X, w)` so that every quantity that is rational in
//! principle (squared minors, projector diagonals, principal minors) stays exact.

mod projection;
mod scaling;

use num_traits::Zero;

use crate::linalg::{QMatrix, Rational};
use crate::matroid::{for_each_k_subset, Matroid, MatroidError, Subset, MAX_GROUND_SIZE};
use crate::measure::BasisMeasure;

pub use projection::{
    matroid_from_projection, principal_rank_bounds, projection, ProjectionMatrix, RankBound, DEFAULT_PROJECTION_TOL,
};
pub use scaling::{
    constant_diag_projection, operator_scale, scaling_certificate, ConstantDiagonal, ScalingOptions,
    ScalingResult, ScalingStatus,
};

/// A full-row-rank `k x n` matrix whose columns are the ground set.
pub type Representation = QMatrix;

pub const DEFAULT_MINOR_CAP: u64 = 2_000_000;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RepresentationError {
    #[error("matrix has rank {rank} but {rows} rows")]
    RankDeficient { rank: usize, rows: usize },
    #[error("{0} columns exceed the supported maximum of 64")]
    TooManyColumns(usize),
    #[error("{count} maximal minors exceed the cap {cap}")]
    TooManyMinors { count: u64, cap: u64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not an orthogonal projection: {0}")]
    NotAProjection(String),
    #[error("projection does not have constant diagonal")]
    NotConstantDiagonal,
    #[error("scaling inconclusive after {iterations} iterations (deviation {deviation:.3e}); no violated density inequality found")]
    Inconclusive { iterations: usize, deviation: f64 },
    #[error(transparent)]
    Matroid(#[from] MatroidError),
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc.min(u64::MAX as u128) as u64
}

pub(crate) fn check_full_rank(x: &QMatrix) -> Result<(), RepresentationError> {
    if x.cols() > MAX_GROUND_SIZE {
        return Err(RepresentationError::TooManyColumns(x.cols()));
    }
    let rank = x.rank();
    if rank != x.rows() {
        return Err(RepresentationError::RankDeficient { rank, rows: x.rows() });
    }
    let count = binomial(x.cols(), x.rows());
    if count > DEFAULT_MINOR_CAP {
        return Err(RepresentationError::TooManyMinors { count, cap: DEFAULT_MINOR_CAP });
    }
    Ok(())
}

/// Calls `f` with every `k`-subset of columns and its maximal minor.
fn for_each_minor(x: &QMatrix, mut f: impl FnMut(Subset, Rational)) {
    let cols: Vec<usize> = (0..x.cols()).collect();
    for_each_k_subset(x.cols(), x.rows(), |mask| {
        let s = Subset::from_mask(mask);
        let idx: Vec<usize> = s.iter().map(|i| cols[i]).collect();
        f(s, x.select_columns(&idx).det());
    });
}

/// Bases are the column sets with a nonzero maximal minor.
pub fn matroid_from_matrix(x: &Representation) -> Result<Matroid, RepresentationError> {
    check_full_rank(x)?;
    let mut bases = Vec::new();
    for_each_minor(x, |s, d| {
        if !d.is_zero() {
            bases.push(s);
        }
    });
    Ok(Matroid::from_masks_unchecked(x.cols(), bases.iter().map(|s| s.mask()).collect()))
}

/// Weights `det(X_B)^2` on the bases of `M(X)`.
pub fn determinantal_measure(x: &Representation) -> Result<BasisMeasure, RepresentationError> {
    determinantal_measure_scaled(x, None)
}

/// Determinantal measure of `X diag(sqrt(w))`: `det(X_B)^2 * prod_{e in B} w_e`.
pub fn determinantal_measure_scaled(
    x: &Representation,
    w: Option<&[Rational]>,
) -> Result<BasisMeasure, RepresentationError> {
    check_full_rank(x)?;
    let mut entries = Vec::new();
    for_each_minor(x, |s, d| {
        if !d.is_zero() {
            entries.push((s, &d * &d * weight_product(w, s)));
        }
    });
    Ok(BasisMeasure::new(entries))
}

fn weight_product(w: Option<&[Rational]>, s: Subset) -> Rational {
    match w {
        None => Rational::from_integer(1.into()),
        Some(w) => s.iter().fold(Rational::from_integer(1.into()), |acc, e| acc * &w[e]),
    }
}

/// Plücker coordinates `det(X_S)` for every `k`-subset `S`, in increasing mask order.
pub fn plucker(x: &Representation) -> Result<Vec<(Subset, Rational)>, RepresentationError> {
    check_full_rank(x)?;
    let mut out = Vec::new();
    for_each_minor(x, |s, d| out.push((s, d)));
    Ok(out)
}

/// Squared Plücker coordinates of `X diag(sqrt(w))`, which are rational even when the
/// coordinates themselves are not.
pub fn plucker_squares(
    x: &Representation,
    w: Option<&[Rational]>,
) -> Result<Vec<(Subset, Rational)>, RepresentationError> {
    check_full_rank(x)?;
    let mut out = Vec::new();
    for_each_minor(x, |s, d| out.push((s, &d * &d * weight_product(w, s))));
    Ok(out)
}

/// Input to the membership test for the variety of strictly uniformly dense representations.
#[derive(Debug, Clone)]
pub enum VarietyInput {
    /// Plücker coordinates indexed by the `k`-subsets of `0..n` in increasing mask order.
    Coordinates { n: usize, k: usize, values: Vec<Rational> },
    /// Squares of the Plücker coordinates, same indexing.
    SquaredCoordinates { n: usize, k: usize, values: Vec<Rational> },
    Projection(ProjectionMatrix),
}

/// Checks `sum_{B∋e} p_B^2` is the same for every `e` (coordinate form), or
/// `T^2 = T` with constant diagonal `k/n` (matrix form).
pub fn variety_membership(input: &VarietyInput) -> Result<bool, RepresentationError> {
    match input {
        VarietyInput::Coordinates { n, k, values } => {
            let squares: Vec<Rational> = values.iter().map(|v| v * v).collect();
            squared_membership(*n, *k, &squares)
        }
        VarietyInput::SquaredCoordinates { n, k, values } => squared_membership(*n, *k, values),
        VarietyInput::Projection(t) => {
            if !t.is_projection() {
                return Ok(false);
            }
            Ok(t.has_constant_diagonal())
        }
    }
}

fn squared_membership(n: usize, k: usize, squares: &[Rational]) -> Result<bool, RepresentationError> {
    if n > MAX_GROUND_SIZE || k > n {
        return Err(RepresentationError::DimensionMismatch(format!("k = {k}, n = {n}")));
    }
    let expected = binomial(n, k);
    if squares.len() as u64 != expected {
        return Err(RepresentationError::DimensionMismatch(format!(
            "{} coordinates given, C({n},{k}) = {expected} expected",
            squares.len()
        )));
    }
    let mut sums = vec![Rational::zero(); n];
    let mut i = 0;
    for_each_k_subset(n, k, |mask| {
        for e in Subset::from_mask(mask).iter() {
            sums[e] += &squares[i];
        }
        i += 1;
    });
    if squares.iter().all(Zero::is_zero) {
        return Ok(false);
    }
    Ok(sums.windows(2).all(|w| w[0] == w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphic::{cycle_matroid, named};
    use crate::linalg::{int, rat};
    use crate::measure::{verify_measure, MeasureCheck};

    pub(crate) fn coloop_matrix() -> QMatrix {
        QMatrix::from_i64(3, 5, &[1, 0, 0, 1, 0, 0, 1, 0, 1, 2, 0, 0, 1, 0, 0])
    }

    #[test]
    fn coloop_matrix_bases() {
        let m = matroid_from_matrix(&coloop_matrix()).unwrap();
        let expected = [[0, 1, 2], [0, 2, 3], [1, 2, 3], [0, 2, 4], [2, 3, 4]];
        let lists: Vec<Vec<usize>> = expected.iter().map(|b| b.to_vec()).collect();
        assert_eq!(m, Matroid::new(5, &lists).unwrap());
    }

    #[test]
    fn identity_is_free() {
        let m = matroid_from_matrix(&QMatrix::identity(4)).unwrap();
        assert_eq!(m, Matroid::uniform(4, 4));
        let mu = determinantal_measure(&QMatrix::identity(3)).unwrap();
        assert_eq!(mu.weights(), &[(Subset::full(3), int(1))]);
    }

    #[test]
    fn rank_deficiency() {
        let x = QMatrix::from_i64(2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(matroid_from_matrix(&x), Err(RepresentationError::RankDeficient { rank: 1, rows: 2 }));
    }

    #[test]
    fn incidence_measure_is_not_uniform() {
        let g = named::diamond();
        let x = g.reduced_incidence_matrix().unwrap();
        assert_eq!(matroid_from_matrix(&x).unwrap(), cycle_matroid(&g).unwrap());
        let mu = determinantal_measure(&x).unwrap();
        assert!(mu.weights().iter().all(|(_, w)| *w == int(1)));
        let m = matroid_from_matrix(&x).unwrap();
        match verify_measure(&m, &mu).unwrap() {
            MeasureCheck::NotEUniform { marginals, .. } => {
                let mut sorted = marginals.clone();
                sorted.sort();
                assert_eq!(sorted.first(), Some(&int(4)));
                assert_eq!(sorted.last(), Some(&int(5)));
            }
            other => panic!("unexpected {other:?}"),
        }
        let squares: Vec<Rational> = plucker(&x).unwrap().into_iter().map(|(_, p)| p).collect();
        assert!(!variety_membership(&VarietyInput::Coordinates { n: 5, k: 3, values: squares }).unwrap());
    }

    #[test]
    fn scaled_measure_pattern() {
        let x = named::diamond_other_chord().reduced_incidence_matrix().unwrap();
        let w = [int(2), int(2), int(2), int(2), int(3)];
        let mu = determinantal_measure_scaled(&x, Some(&w)).unwrap();
        for (b, weight) in mu.weights() {
            assert_eq!(*weight, if b.contains(4) { int(12) } else { int(8) });
        }
        let m = matroid_from_matrix(&x).unwrap();
        assert_eq!(verify_measure(&m, &mu.normalized()).unwrap(), MeasureCheck::EUniform { marginal: rat(3, 5) });
        let squares: Vec<Rational> = plucker_squares(&x, Some(&w)).unwrap().into_iter().map(|(_, p)| p).collect();
        assert!(variety_membership(&VarietyInput::SquaredCoordinates { n: 5, k: 3, values: squares }).unwrap());
    }

    #[test]
    fn variety_dimension_checks() {
        let bad = VarietyInput::SquaredCoordinates { n: 4, k: 2, values: vec![int(1); 5] };
        assert!(matches!(variety_membership(&bad), Err(RepresentationError::DimensionMismatch(_))));
        let id = VarietyInput::Projection(ProjectionMatrix::exact(QMatrix::identity(3)));
        assert!(variety_membership(&id).unwrap());
    }
}
