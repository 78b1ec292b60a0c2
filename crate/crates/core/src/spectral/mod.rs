//! Normalized vertex Laplacian and edge Laplacian of a graph.
//!
//! Ranks and nullities are exact. Eigenvalues come from cyclic Jacobi rotations
//! on the floating view.

mod bounds;

use nalgebra::DMatrix;
use num_traits::{One, Signed};

use crate::graphic::{Graph, GraphError};
use crate::linalg::{to_f64, usize_rat, QMatrix, Rational};

pub use bounds::{
    lambda_max_bounds, spectral_ud_check, stable_bound, BoundCheck, BoundsReport, PackingBound, SpectralCheck,
    SpectralVerdict, SubsetBound, SubsetBounds, SubsetSelection, DEFAULT_SAMPLE_SEED, SPECTRAL_SUBSET_CAP,
};

pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CapExceeded { what: &'static str, size: usize, cap: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Symmetric matrix with entries `sqrt(w_i w_j) * core_ij`.
///
/// Without weights the core is the matrix itself. The core is exact and
/// determines the rank; the floating view is derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    core: QMatrix,
    weights: Option<Vec<Rational>>,
}

impl SymMatrix {
    pub fn new(core: QMatrix) -> Self {
        assert!(core.is_symmetric(), "matrix is not symmetric");
        SymMatrix { core, weights: None }
    }

    /// Weights must be positive.
    pub fn scaled(core: QMatrix, weights: Vec<Rational>) -> Self {
        assert!(core.is_symmetric(), "matrix is not symmetric");
        assert_eq!(weights.len(), core.rows());
        assert!(weights.iter().all(Signed::is_positive), "weights must be positive");
        SymMatrix { core, weights: Some(weights) }
    }

    pub fn identity(d: usize) -> Self {
        SymMatrix::new(QMatrix::identity(d))
    }

    pub fn dim(&self) -> usize {
        self.core.rows()
    }

    pub fn core(&self) -> &QMatrix {
        &self.core
    }

    pub fn weights(&self) -> Option<&[Rational]> {
        self.weights.as_deref()
    }

    /// Exact entries, available when no scaling is applied.
    pub fn exact(&self) -> Option<&QMatrix> {
        self.weights.is_none().then_some(&self.core)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        let d = self.dim();
        let s: Vec<f64> = match &self.weights {
            None => vec![1.0; d],
            Some(w) => w.iter().map(|v| to_f64(v).sqrt()).collect(),
        };
        DMatrix::from_fn(d, d, |i, j| s[i] * s[j] * to_f64(self.core.get(i, j)))
    }

    pub fn rank(&self) -> usize {
        self.core.rank()
    }

    /// `x^T M x / x^T x`.
    pub fn rayleigh_quotient(&self, x: &[f64]) -> f64 {
        let m = self.to_f64();
        let v = nalgebra::DVector::from_column_slice(x);
        v.dot(&(&m * &v)) / v.dot(&v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    pub nullity: usize,
}

impl Spectrum {
    pub fn max(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// Eigenvalues with absolute value above `tol`.
    pub fn nonzero(&self, tol: f64) -> Vec<f64> {
        self.eigenvalues.iter().copied().filter(|v| v.abs() > tol).collect()
    }
}

fn check_isolated(g: &Graph) -> Result<Vec<usize>, SpectralError> {
    let deg = g.degrees();
    match deg.iter().position(|&d| d == 0) {
        Some(v) => Err(SpectralError::IsolatedVertex(v)),
        None => Ok(deg),
    }
}

/// `I - D^{-1/2} A D^{-1/2}`, stored as `D - A` with weights `1/deg`.
pub fn normalized_laplacian(g: &Graph) -> Result<SymMatrix, SpectralError> {
    let deg = check_isolated(g)?;
    let weights = deg.iter().map(|&d| Rational::one() / usize_rat(d)).collect();
    Ok(SymMatrix::scaled(g.laplacian(), weights))
}

/// `N^T D^{-1} N` for the signed vertex-edge incidence matrix `N`.
pub fn edge_laplacian(g: &Graph) -> Result<SymMatrix, SpectralError> {
    let deg = check_isolated(g)?;
    let n = g.incidence_matrix();
    let inv: Vec<Rational> = deg.iter().map(|&d| Rational::one() / usize_rat(d)).collect();
    let mut scaled = n.transpose();
    scaled = scaled.scale_columns(&inv);
    Ok(SymMatrix::new(scaled.mul(&n)))
}

/// Dimension minus exact rank.
pub fn nullity(m: &SymMatrix) -> usize {
    m.dim() - m.rank()
}

/// All eigenvalues in ascending order.
///
/// Sweeps stop once the off-diagonal Frobenius norm is at most `tol` times
/// `max(1, ||M||_F)`.
pub fn eigenvalues(m: &SymMatrix, tol: f64) -> Result<Vec<f64>, SpectralError> {
    jacobi(m.to_f64(), tol)
}

pub fn eigen_max(m: &SymMatrix, tol: f64) -> Result<f64, SpectralError> {
    Ok(eigenvalues(m, tol)?.last().copied().unwrap_or(0.0))
}

pub fn spectrum(m: &SymMatrix, tol: f64) -> Result<Spectrum, SpectralError> {
    let eigenvalues = eigenvalues(m, tol)?;
    let nullity = nullity(m);
    let small = eigenvalues.iter().filter(|v| v.abs() < 1e-8).count();
    assert_eq!(small, nullity, "numerical zero eigenvalues disagree with exact nullity");
    Ok(Spectrum { eigenvalues, nullity })
}

/// Spectrum of the normalized Laplacian, asserted to lie in `[0, 2]`.
pub fn laplacian_spectrum(g: &Graph) -> Result<Spectrum, SpectralError> {
    let s = spectrum(&normalized_laplacian(g)?, DEFAULT_EIGEN_TOL)?;
    assert!(s.eigenvalues.iter().all(|&v| (-1e-10..=2.0 + 1e-10).contains(&v)));
    Ok(s)
}

pub fn lambda_max(g: &Graph) -> Result<f64, SpectralError> {
    eigen_max(&normalized_laplacian(g)?, DEFAULT_EIGEN_TOL)
}

/// `sum_{uv in E} (f(u) - f(v))^2 / sum_v deg(v) f(v)^2`.
pub fn rayleigh_quotient(g: &Graph, f: &[f64]) -> f64 {
    let num: f64 = g.edges().iter().map(|&(u, v)| (f[u] - f[v]).powi(2)).sum();
    let den: f64 = g.degrees().iter().zip(f).map(|(&d, x)| d as f64 * x * x).sum();
    num / den
}

fn jacobi(mut a: DMatrix<f64>, tol: f64) -> Result<Vec<f64>, SpectralError> {
    let d = a.nrows();
    let scale = a.norm().max(1.0);
    let off_norm = |a: &DMatrix<f64>| {
        let mut s = 0.0;
        for i in 0..d {
            for j in 0..d {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..MAX_SWEEPS {
        if off_norm(&a) <= tol * scale {
            let mut ev: Vec<f64> = (0..d).map(|i| a[(i, i)]).collect();
            ev.sort_by(f64::total_cmp);
            return Ok(ev);
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..d {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..d {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
            }
        }
    }
    Err(SpectralError::NoConvergence { sweeps: MAX_SWEEPS, off_norm: off_norm(&a) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphic::named;
    use crate::linalg::int;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn complete_graph_lambda_max() {
        assert!(close(lambda_max(&named::complete(4)).unwrap(), 4.0 / 3.0));
        assert!(close(lambda_max(&named::complete(5)).unwrap(), 1.25));
        let edge = Graph::new(2, &[(0, 1)]).unwrap();
        let s = laplacian_spectrum(&edge).unwrap();
        assert!(close(s.eigenvalues[0], 0.0) && close(s.eigenvalues[1], 2.0));
    }

    #[test]
    fn tree_and_identity() {
        assert!(close(lambda_max(&named::path(6)).unwrap(), 2.0));
        assert!(close(lambda_max(&named::star(4)).unwrap(), 2.0));
        assert!(close(eigen_max(&SymMatrix::identity(4), DEFAULT_EIGEN_TOL).unwrap(), 1.0));
    }

    #[test]
    fn edge_laplacian_nullities() {
        assert_eq!(nullity(&edge_laplacian(&named::cycle(4)).unwrap()), 1);
        assert_eq!(nullity(&edge_laplacian(&named::path(5)).unwrap()), 0);
        assert_eq!(nullity(&edge_laplacian(&named::diamond()).unwrap()), 2);
        assert_eq!(nullity(&edge_laplacian(&named::clique_and_cycle()).unwrap()), 7);
        let two = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(nullity(&normalized_laplacian(&two).unwrap()), 2);
        assert_eq!(nullity(&SymMatrix::new(QMatrix::zeros(3, 3))), 3);
    }

    #[test]
    fn isolated_vertex_rejected() {
        let g = Graph::new(3, &[(0, 1)]).unwrap();
        assert_eq!(normalized_laplacian(&g), Err(SpectralError::IsolatedVertex(2)));
        assert_eq!(edge_laplacian(&g), Err(SpectralError::IsolatedVertex(2)));
    }

    #[test]
    fn nonzero_spectra_coincide() {
        for g in [named::petersen(), named::diamond(), named::tadpole(), named::prism()] {
            let l = laplacian_spectrum(&g).unwrap().nonzero(1e-9);
            let l1 = spectrum(&edge_laplacian(&g).unwrap(), DEFAULT_EIGEN_TOL).unwrap().nonzero(1e-9);
            assert_eq!(l.len(), l1.len());
            assert!(l.iter().zip(&l1).all(|(a, b)| (a - b).abs() < 1e-8));
        }
    }

    #[test]
    fn rayleigh_quotient_below_lambda_max() {
        let g = named::petersen();
        let f: Vec<f64> = (0..10).map(|v| if v % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let deg = g.degrees();
        let x: Vec<f64> = f.iter().zip(&deg).map(|(v, &d)| v * (d as f64).sqrt()).collect();
        let rq = rayleigh_quotient(&g, &f);
        assert!(close(rq, normalized_laplacian(&g).unwrap().rayleigh_quotient(&x)));
        assert!(lambda_max(&g).unwrap() >= rq - 1e-12);
    }

    #[test]
    fn jacobi_reports_no_convergence() {
        let m = SymMatrix::new(QMatrix::from_i64(2, 2, &[1, 2, 2, 1]));
        assert!(close(eigen_max(&m, DEFAULT_EIGEN_TOL).unwrap(), 3.0));
        let m = SymMatrix::scaled(QMatrix::from_i64(2, 2, &[0, 1, 1, 0]), vec![int(1), int(4)]);
        assert!(close(eigen_max(&m, DEFAULT_EIGEN_TOL).unwrap(), 2.0));
        assert!(matches!(jacobi(DMatrix::from_element(3, 3, 1.0), -1.0), Err(SpectralError::NoConvergence { .. })));
    }
}
