use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::projection::projector_core;
use super::{determinantal_measure_scaled, matroid_from_matrix, ProjectionMatrix, RepresentationError};
use crate::linalg::{approximate_rational, to_f64, usize_rat, QMatrix, Rational};
use crate::matroid::{
    better, is_strictly_uniformly_dense_with, merge, Candidate, Certificate, Density, ScanOptions, Subset,
    Verdict, Violator, MAX_GROUND_SIZE,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingOptions {
    /// Stop once every diagonal entry is within `tol` of `k/n`.
    pub tol: f64,
    pub max_iter: usize,
    /// Divergence is declared once `max w / min w` exceeds this.
    pub max_ratio: f64,
    /// Largest denominator tried when rationalising converged weights.
    pub max_denominator: u64,
    /// Limits of the exact fallback enumeration.
    pub scan: ScanOptions,
}

impl Default for ScalingOptions {
    fn default() -> Self {
        ScalingOptions {
            tol: 1e-10,
            max_iter: 10_000,
            max_ratio: 1e12,
            max_denominator: 1_000_000,
            scan: ScanOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ScalingStatus {
    /// `weights` are normalised to minimum one; `exact_weights` is the smallest
    /// integer vector proportional to them, present when the diagonal was verified
    /// to equal `k/n` exactly.
    Converged { weights: Vec<f64>, exact_weights: Option<Vec<Rational>> },
    /// A subset denser than the ground set.
    Violated(Violator),
    /// Uniformly dense but not strictly: a non-component subset attaining the density.
    Boundary(Violator),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingResult {
    pub status: ScalingStatus,
    pub iterations: usize,
    /// Final `max_e |T_ee - k/n|`.
    pub deviation: f64,
    /// Deviation after each iteration.
    pub history: Vec<f64>,
}

impl ScalingResult {
    pub fn converged(&self) -> bool {
        matches!(self.status, ScalingStatus::Converged { .. })
    }

    pub fn verdict(&self) -> Verdict {
        match self.status {
            ScalingStatus::Converged { .. } => Verdict::StrictlyUniformlyDense,
            ScalingStatus::Violated(_) => Verdict::NotUniformlyDense,
            ScalingStatus::Boundary(_) => Verdict::UniformlyDenseNotStrict,
        }
    }
}

fn check_rank(x: &QMatrix) -> Result<(), RepresentationError> {
    if x.cols() > MAX_GROUND_SIZE {
        return Err(RepresentationError::TooManyColumns(x.cols()));
    }
    let rank = x.rank();
    if rank != x.rows() {
        return Err(RepresentationError::RankDeficient { rank, rows: x.rows() });
    }
    Ok(())
}

/// Diagonal of the projector onto the row space of `X diag(sqrt(w))`.
fn scaled_diagonal(x: &DMatrix<f64>, w: &[f64]) -> Option<Vec<f64>> {
    let (k, n) = x.shape();
    let mut xw = x.clone();
    for (j, wj) in w.iter().enumerate() {
        xw.column_mut(j).scale_mut(*wj);
    }
    let gram = &xw * x.transpose();
    let chol = gram.cholesky()?;
    let y = chol.solve(x);
    let d: Vec<f64> = (0..n).map(|e| w[e] * (0..k).map(|i| x[(i, e)] * y[(i, e)]).sum::<f64>()).collect();
    d.iter().all(|v| v.is_finite()).then_some(d)
}

/// Column scaling driving the projector diagonal to `k/n`.
///
/// Each round replaces `w_e` by `w_e (k/n) / T_ee` and rescales `w` to unit
/// geometric mean. Without convergence, heavy-first prefixes of the weight order
/// are tested exactly for a violated density inequality; failing that, the
/// matroid is enumerated exactly when it fits the subset cap.
pub fn operator_scale(x: &QMatrix, options: &ScalingOptions) -> Result<ScalingResult, RepresentationError> {
    check_rank(x)?;
    let (k, n) = (x.rows(), x.cols());
    if k == 0 || n == 0 {
        return Ok(ScalingResult {
            status: ScalingStatus::Converged { weights: vec![1.0; n], exact_weights: Some(vec![Rational::one(); n]) },
            iterations: 1,
            deviation: 0.0,
            history: vec![0.0],
        });
    }
    if let Some(e) = (0..n).find(|&e| (0..k).all(|i| x.get(i, e).is_zero())) {
        return Ok(ScalingResult {
            status: ScalingStatus::Violated(Violator::new(Subset::EMPTY.with(e), 0)),
            iterations: 0,
            deviation: f64::INFINITY,
            history: Vec::new(),
        });
    }
    let target = k as f64 / n as f64;
    let xf = DMatrix::from_fn(k, n, |i, j| to_f64(x.get(i, j)));
    let mut w = vec![1.0f64; n];
    let mut history = Vec::new();
    let mut converged = false;
    let mut deviation = f64::INFINITY;
    for _ in 0..options.max_iter {
        let Some(d) = scaled_diagonal(&xf, &w) else {
            break;
        };
        deviation = d.iter().map(|v| (v - target).abs()).fold(0.0, f64::max);
        history.push(deviation);
        if deviation <= options.tol {
            converged = true;
            break;
        }
        for (we, de) in w.iter_mut().zip(&d) {
            *we *= target / de;
        }
        let log_mean = w.iter().map(|v| v.ln()).sum::<f64>() / n as f64;
        let g = log_mean.exp();
        w.iter_mut().for_each(|v| *v /= g);
        let (lo, hi) = min_max(&w);
        if !(hi / lo).is_finite() || hi / lo > options.max_ratio {
            break;
        }
    }
    let iterations = history.len();
    log::debug!("operator scaling: {iterations} iterations, deviation {deviation:.3e}, converged {converged}");

    if converged {
        let (lo, _) = min_max(&w);
        let weights: Vec<f64> = w.iter().map(|v| v / lo).collect();
        let exact_weights = rationalize(x, &weights, options.max_denominator);
        return Ok(ScalingResult {
            status: ScalingStatus::Converged { weights, exact_weights },
            iterations,
            deviation,
            history,
        });
    }

    let status = match heavy_prefix_violator(x, &w) {
        Some(v) => ScalingStatus::Violated(v),
        None => exact_fallback(x, options, iterations, deviation)?,
    };
    Ok(ScalingResult { status, iterations, deviation, history })
}

fn min_max(w: &[f64]) -> (f64, f64) {
    w.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

/// Rational weights with `diag T = k/n` exactly, scaled to the smallest integer vector.
fn rationalize(x: &QMatrix, weights: &[f64], max_denominator: u64) -> Option<Vec<Rational>> {
    let target = usize_rat(x.rows()) / usize_rat(x.cols());
    let mut denom = 1u64;
    while denom <= max_denominator {
        let candidate: Option<Vec<Rational>> = weights.iter().map(|&v| approximate_rational(v, denom)).collect();
        if let Some(wq) = candidate.filter(|wq| wq.iter().all(Signed::is_positive)) {
            let core = projector_core(x, Some(&wq));
            if (0..x.cols()).all(|e| &wq[e] * core.get(e, e) == target) {
                return Some(integer_presentation(&wq));
            }
        }
        denom *= 10;
    }
    None
}

fn integer_presentation(w: &[Rational]) -> Vec<Rational> {
    let lcm = w.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = w.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    ints.into_iter().map(|v| Rational::from_integer(v / &gcd)).collect()
}

/// Tests each prefix of the columns sorted by decreasing weight.
fn heavy_prefix_violator(x: &QMatrix, w: &[f64]) -> Option<Violator> {
    let (k, n) = (x.rows(), x.cols());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w[b].partial_cmp(&w[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    let mut best: Option<Candidate> = None;
    for p in 1..n {
        let mut prefix = order[..p].to_vec();
        prefix.sort_unstable();
        let rank = x.select_columns(&prefix).rank();
        if p * k > n * rank {
            let mask = Subset::from_indices(&prefix).mask();
            merge(&mut best, Candidate { mask, size: p, rank }, better);
        }
    }
    best.map(|c| Violator::new(Subset::from_mask(c.mask), c.rank))
}

fn exact_fallback(
    x: &QMatrix,
    options: &ScalingOptions,
    iterations: usize,
    deviation: f64,
) -> Result<ScalingStatus, RepresentationError> {
    let inconclusive = RepresentationError::Inconclusive { iterations, deviation };
    if x.cols() > options.scan.subset_cap.min(40) {
        return Err(inconclusive);
    }
    let m = matroid_from_matrix(x)?;
    let cert = is_strictly_uniformly_dense_with(&m, &options.scan)?;
    match (cert.verdict, cert.violator) {
        (Verdict::NotUniformlyDense, Some(v)) => Ok(ScalingStatus::Violated(v)),
        (Verdict::UniformlyDenseNotStrict, Some(v)) => Ok(ScalingStatus::Boundary(v)),
        _ => Err(inconclusive),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConstantDiagonal {
    Projection { matrix: ProjectionMatrix, scaling: ScalingResult },
    NotStrictlyUniformlyDense(ScalingResult),
}

/// Scales `X` and returns the projector of the scaled matrix, whose diagonal is `k/n`.
pub fn constant_diag_projection(
    x: &QMatrix,
    options: &ScalingOptions,
) -> Result<ConstantDiagonal, RepresentationError> {
    let scaling = operator_scale(x, options)?;
    let ScalingStatus::Converged { weights, exact_weights } = &scaling.status else {
        return Ok(ConstantDiagonal::NotStrictlyUniformlyDense(scaling));
    };
    let target = usize_rat(x.rows()) / usize_rat(x.cols().max(1));
    let matrix = match exact_weights {
        Some(wq) => {
            let t = ProjectionMatrix::scaled(projector_core(x, Some(wq)), wq.clone());
            assert!(t.diagonal_exact().expect("exact").iter().all(|d| *d == target));
            t
        }
        None => {
            let (k, n) = (x.rows(), x.cols());
            let xf = DMatrix::from_fn(k, n, |i, j| to_f64(x.get(i, j)) * weights[j].sqrt());
            let gram = &xf * xf.transpose();
            let inv = gram.cholesky().ok_or(RepresentationError::Inconclusive {
                iterations: scaling.iterations,
                deviation: scaling.deviation,
            })?;
            let t = xf.transpose() * inv.solve(&xf);
            let t = ProjectionMatrix::approx(t, 1e-9);
            let tf = to_f64(&target);
            assert!(t.diagonal_f64().iter().all(|d| (d - tf).abs() <= 1e-9));
            t
        }
    };
    Ok(ConstantDiagonal::Projection { matrix, scaling })
}

/// Strict uniform density verdict from operator scaling, as a certificate.
pub fn scaling_certificate(x: &QMatrix, options: &ScalingOptions, scan: &ScanOptions) -> Result<Certificate, RepresentationError> {
    let options = ScalingOptions { scan: *scan, ..*options };
    let result = operator_scale(x, &options)?;
    let density = Density::of(x.cols(), x.rows());
    let verdict = result.verdict();
    let (violator, witness) = match result.status {
        ScalingStatus::Converged { exact_weights: Some(w), .. } => {
            let witness = determinantal_measure_scaled(x, Some(&w)).ok().map(|m| m.normalized());
            (None, witness)
        }
        ScalingStatus::Converged { exact_weights: None, .. } => (None, None),
        ScalingStatus::Violated(v) | ScalingStatus::Boundary(v) => (Some(v), None),
    };
    Ok(Certificate { verdict, density, violator, witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphic::named;
    use crate::linalg::int;

    #[test]
    fn incidence_scaling_converges_to_integer_weights() {
        let x = named::diamond_other_chord().reduced_incidence_matrix().unwrap();
        let r = operator_scale(&x, &ScalingOptions::default()).unwrap();
        match &r.status {
            ScalingStatus::Converged { weights, exact_weights } => {
                for (w, e) in weights.iter().zip([1.0, 1.0, 1.0, 1.0, 1.5]) {
                    assert!((w - e).abs() < 1e-8);
                }
                assert_eq!(exact_weights.as_deref(), Some(&[int(2), int(2), int(2), int(2), int(3)][..]));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(r.deviation <= 1e-10);
    }

    #[test]
    fn fixed_point_converges_immediately() {
        let r = operator_scale(&QMatrix::identity(3), &ScalingOptions::default()).unwrap();
        assert_eq!(r.iterations, 1);
        assert!(r.converged());
        let u = QMatrix::from_i64(1, 3, &[1, 1, 1]);
        let r = operator_scale(&u, &ScalingOptions::default()).unwrap();
        assert_eq!(r.iterations, 1);
    }

    #[test]
    fn coloop_diverges_with_a_violator() {
        let x = super::super::tests::coloop_matrix();
        let r = operator_scale(&x, &ScalingOptions::default()).unwrap();
        match r.status {
            ScalingStatus::Violated(v) => {
                let m = matroid_from_matrix(&x).unwrap();
                assert!(m.density_value(v.subset) > m.matroid_density());
            }
            other => panic!("unexpected {other:?}"),
        }
        let tadpole = named::tadpole().reduced_incidence_matrix().unwrap();
        match operator_scale(&tadpole, &ScalingOptions::default()).unwrap().status {
            ScalingStatus::Violated(v) => assert_eq!(v.subset, Subset::from_indices(&[1, 2, 3])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn zero_column_is_a_loop() {
        let x = QMatrix::from_i64(1, 2, &[1, 0]);
        match operator_scale(&x, &ScalingOptions::default()).unwrap().status {
            ScalingStatus::Violated(v) => {
                assert_eq!(v.subset, Subset::from_indices(&[1]));
                assert_eq!(v.density, Density::Infinite);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn boundary_theta_graph() {
        let x = named::theta(3, 3, 6).reduced_incidence_matrix().unwrap();
        let r = operator_scale(&x, &ScalingOptions::default()).unwrap();
        assert!(matches!(r.status, ScalingStatus::Boundary(_)), "{:?}", r.status);
        let y = named::theta(2, 3, 6).reduced_incidence_matrix().unwrap();
        let r = operator_scale(&y, &ScalingOptions::default()).unwrap();
        assert!(matches!(r.status, ScalingStatus::Violated(_)));
    }

    #[test]
    fn constant_diagonal_projector() {
        let x = named::diamond_other_chord().reduced_incidence_matrix().unwrap();
        match constant_diag_projection(&x, &ScalingOptions::default()).unwrap() {
            ConstantDiagonal::Projection { matrix, .. } => {
                assert!(matrix.is_projection());
                assert!(matrix.has_constant_diagonal());
            }
            other => panic!("unexpected {other:?}"),
        }
        let t = named::tadpole().reduced_incidence_matrix().unwrap();
        assert!(matches!(
            constant_diag_projection(&t, &ScalingOptions::default()).unwrap(),
            ConstantDiagonal::NotStrictlyUniformlyDense(_)
        ));
    }
}
