use nalgebra::DMatrix;
use num_traits::{ToPrimitive, Zero};

use super::{binomial, check_full_rank, RepresentationError, DEFAULT_MINOR_CAP};
use crate::linalg::{to_f64, usize_rat, QMatrix, Rational};
use crate::matroid::{for_each_k_subset, Matroid, Subset, MAX_GROUND_SIZE};

pub const DEFAULT_PROJECTION_TOL: f64 = 1e-10;

/// Symmetric `n x n` orthogonal projector.
///
/// `Exact` stores a rational core `K` and optional positive weights `w`, standing for
/// `T_ij = sqrt(w_i w_j) K_ij`; without weights `T = K`.
#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionMatrix {
    Exact { core: QMatrix, weights: Option<Vec<Rational>> },
    Approx { entries: DMatrix<f64>, tol: f64 },
}

impl ProjectionMatrix {
    pub fn exact(core: QMatrix) -> Self {
        ProjectionMatrix::Exact { core, weights: None }
    }

    pub fn scaled(core: QMatrix, weights: Vec<Rational>) -> Self {
        assert_eq!(core.cols(), weights.len());
        ProjectionMatrix::Exact { core, weights: Some(weights) }
    }

    pub fn approx(entries: DMatrix<f64>, tol: f64) -> Self {
        ProjectionMatrix::Approx { entries, tol }
    }

    pub fn dim(&self) -> usize {
        match self {
            ProjectionMatrix::Exact { core, .. } => core.rows(),
            ProjectionMatrix::Approx { entries, .. } => entries.nrows(),
        }
    }

    pub fn tol(&self) -> f64 {
        match self {
            ProjectionMatrix::Exact { .. } => 0.0,
            ProjectionMatrix::Approx { tol, .. } => *tol,
        }
    }

    fn weight(&self, i: usize) -> Option<&Rational> {
        match self {
            ProjectionMatrix::Exact { weights: Some(w), .. } => Some(&w[i]),
            _ => None,
        }
    }

    /// Rational entries, available when no square roots are involved.
    pub fn exact_entries(&self) -> Option<QMatrix> {
        match self {
            ProjectionMatrix::Exact { core, weights: None } => Some(core.clone()),
            _ => None,
        }
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        match self {
            ProjectionMatrix::Approx { entries, .. } => entries.clone(),
            ProjectionMatrix::Exact { core, weights } => {
                let n = core.rows();
                DMatrix::from_fn(n, n, |i, j| {
                    let k = to_f64(core.get(i, j));
                    match weights {
                        None => k,
                        Some(w) => (to_f64(&w[i]) * to_f64(&w[j])).sqrt() * k,
                    }
                })
            }
        }
    }

    pub fn diagonal_exact(&self) -> Option<Vec<Rational>> {
        match self {
            ProjectionMatrix::Approx { .. } => None,
            ProjectionMatrix::Exact { core, .. } => Some(
                (0..core.rows())
                    .map(|i| match self.weight(i) {
                        Some(w) => w * core.get(i, i),
                        None => core.get(i, i).clone(),
                    })
                    .collect(),
            ),
        }
    }

    pub fn diagonal_f64(&self) -> Vec<f64> {
        match self.diagonal_exact() {
            Some(d) => d.iter().map(to_f64).collect(),
            None => {
                let t = self.to_f64();
                (0..t.nrows()).map(|i| t[(i, i)]).collect()
            }
        }
    }

    pub fn trace_exact(&self) -> Option<Rational> {
        self.diagonal_exact().map(|d| d.into_iter().fold(Rational::zero(), |a, v| a + v))
    }

    /// Rank, read off the trace.
    pub fn rank(&self) -> usize {
        match self.trace_exact() {
            Some(t) => t.round().to_integer().to_usize().unwrap_or(0),
            None => self.diagonal_f64().iter().sum::<f64>().round().max(0.0) as usize,
        }
    }

    /// Exact `T^2 = T` and symmetry, or within `tol` for approximate matrices.
    pub fn is_projection(&self) -> bool {
        match self {
            ProjectionMatrix::Exact { core, weights } => {
                if !core.is_symmetric() {
                    return false;
                }
                match weights {
                    None => core.mul(core) == *core,
                    Some(w) => {
                        if w.iter().any(|v| v <= &Rational::zero()) {
                            return false;
                        }
                        core.scale_columns(w).mul(core) == *core
                    }
                }
            }
            ProjectionMatrix::Approx { entries, tol } => {
                let sym = (entries - entries.transpose()).amax() <= *tol;
                let idem = (entries * entries - entries).amax() <= *tol;
                sym && idem
            }
        }
    }

    /// All diagonal entries equal (exactly, or within `tol`).
    pub fn has_constant_diagonal(&self) -> bool {
        match self.diagonal_exact() {
            Some(d) => d.windows(2).all(|w| w[0] == w[1]),
            None => {
                let d = self.diagonal_f64();
                let lo = d.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                d.is_empty() || hi - lo <= self.tol().max(1e-12)
            }
        }
    }

    /// `det(T_SS)` exactly: `prod_{i in S} w_i * det(K_SS)`.
    pub fn principal_det_exact(&self, idx: &[usize]) -> Option<Rational> {
        match self {
            ProjectionMatrix::Approx { .. } => None,
            ProjectionMatrix::Exact { core, weights } => {
                let d = core.principal(idx).det();
                Some(match weights {
                    None => d,
                    Some(w) => idx.iter().fold(d, |acc, &i| acc * &w[i]),
                })
            }
        }
    }

    /// Rank of the principal submatrix on `idx`.
    pub fn principal_rank(&self, idx: &[usize]) -> usize {
        match self {
            ProjectionMatrix::Exact { core, .. } => core.principal(idx).rank(),
            ProjectionMatrix::Approx { entries, tol } => {
                if idx.is_empty() {
                    return 0;
                }
                let sub = DMatrix::from_fn(idx.len(), idx.len(), |i, j| entries[(idx[i], idx[j])]);
                let threshold = (tol * 1e3).max(1e-9);
                sub.singular_values().iter().filter(|&&s| s > threshold).count()
            }
        }
    }
}

/// `T = X^T (X X^T)^{-1} X`, exactly.
pub fn projection(x: &QMatrix) -> Result<ProjectionMatrix, RepresentationError> {
    check_full_rank(x)?;
    Ok(ProjectionMatrix::exact(projector_core(x, None)))
}

/// `X^T (X W X^T)^{-1} X`; with weights this is the core of the projector of `X diag(sqrt(w))`.
pub(crate) fn projector_core(x: &QMatrix, w: Option<&[Rational]>) -> QMatrix {
    if x.rows() == 0 {
        return QMatrix::zeros(x.cols(), x.cols());
    }
    let xt = x.transpose();
    let gram = match w {
        None => x.mul(&xt),
        Some(w) => x.scale_columns(w).mul(&xt),
    };
    let inv = gram.inverse().expect("full row rank makes the Gram matrix invertible");
    xt.mul(&inv).mul(x)
}

/// Bases are the `k`-sets whose principal submatrix is nonsingular.
pub fn matroid_from_projection(t: &ProjectionMatrix) -> Result<Matroid, RepresentationError> {
    let n = t.dim();
    if n > MAX_GROUND_SIZE {
        return Err(RepresentationError::TooManyColumns(n));
    }
    if !t.is_projection() {
        return Err(RepresentationError::NotAProjection("T^2 differs from T or T is not symmetric".into()));
    }
    let k = t.rank();
    if let Some(tr) = t.trace_exact() {
        if tr != usize_rat(k) {
            return Err(RepresentationError::NotAProjection("trace is not an integer".into()));
        }
    }
    let count = binomial(n, k);
    if count > DEFAULT_MINOR_CAP {
        return Err(RepresentationError::TooManyMinors { count, cap: DEFAULT_MINOR_CAP });
    }
    let mut bases = Vec::new();
    for_each_k_subset(n, k, |mask| {
        let idx = Subset::from_mask(mask).indices();
        let nonsingular = match t.principal_det_exact(&idx) {
            Some(d) => !d.is_zero(),
            None => t.principal_rank(&idx) == k,
        };
        if nonsingular {
            bases.push(mask);
        }
    });
    if bases.is_empty() {
        return Err(RepresentationError::NotAProjection("no nonsingular principal submatrix of full size".into()));
    }
    Ok(Matroid::from_masks_unchecked(n, bases))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankBound {
    Holds,
    /// A principal submatrix whose rank is below `|A| k / n`.
    Counterexample { subset: Subset, rank: usize },
}

pub const RANK_BOUND_CAP: usize = 20;

/// Checks `rank(T_AA) >= |A| k / n` for every nonempty proper `A`.
pub fn principal_rank_bounds(t: &ProjectionMatrix) -> Result<RankBound, RepresentationError> {
    let n = t.dim();
    if n > RANK_BOUND_CAP {
        return Err(RepresentationError::DimensionMismatch(format!(
            "principal rank bounds need n <= {RANK_BOUND_CAP}, got {n}"
        )));
    }
    if !t.has_constant_diagonal() {
        return Err(RepresentationError::NotConstantDiagonal);
    }
    if !t.is_projection() {
        return Err(RepresentationError::NotAProjection("T^2 differs from T or T is not symmetric".into()));
    }
    let k = t.rank();
    let full = (1u64 << n) - 1;
    let mut best: Option<(usize, u64, usize)> = None;
    for mask in 1..full {
        let idx = Subset::from_mask(mask).indices();
        let size = idx.len();
        if best.is_some_and(|(s, _, _)| size >= s) {
            continue;
        }
        let r = t.principal_rank(&idx);
        if r * n < size * k {
            best = Some((size, mask, r));
        }
    }
    Ok(match best {
        None => RankBound::Holds,
        Some((_, mask, rank)) => RankBound::Counterexample { subset: Subset::from_mask(mask), rank },
    })
}
