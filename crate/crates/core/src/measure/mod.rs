//! Basis measures and the search for measures with equal element marginals.

pub mod simplex;

use num_traits::{Signed, Zero};

use crate::linalg::{format_rational, usize_rat, Rational};
use crate::matroid::{Matroid, Subset};
use simplex::{LinearProgram, LpOutcome};

pub const DEFAULT_BASIS_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MeasureError {
    #[error("weight placed on {0:?}, which is not a basis")]
    SupportMismatch(Subset),
    #[error("negative weight {weight} on basis {basis:?}")]
    NegativeWeight { basis: Subset, weight: String },
    #[error("{count} bases exceed the cap {cap}")]
    TooManyBases { count: usize, cap: usize },
}

/// Nonnegative weights on bases, kept in increasing basis order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BasisMeasure {
    weights: Vec<(Subset, Rational)>,
}

impl BasisMeasure {
    /// Merges repeated bases by adding their weights.
    pub fn new(entries: impl IntoIterator<Item = (Subset, Rational)>) -> Self {
        let mut weights: Vec<(Subset, Rational)> = entries.into_iter().collect();
        weights.sort_by_key(|(b, _)| *b);
        let mut merged: Vec<(Subset, Rational)> = Vec::with_capacity(weights.len());
        for (b, w) in weights {
            match merged.last_mut() {
                Some((last, acc)) if *last == b => *acc += w,
                _ => merged.push((b, w)),
            }
        }
        BasisMeasure { weights: merged }
    }

    /// The same weight on every basis.
    pub fn constant(m: &Matroid, weight: Rational) -> Self {
        BasisMeasure::new(m.bases().map(|b| (b, weight.clone())))
    }

    pub fn weights(&self) -> &[(Subset, Rational)] {
        &self.weights
    }

    pub fn weight(&self, basis: Subset) -> Rational {
        self.weights
            .binary_search_by_key(&basis, |(b, _)| *b)
            .map(|i| self.weights[i].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |acc, (_, w)| acc + w)
    }

    /// `marginal(e) = sum of weights of bases containing e`, for `e < n`.
    pub fn marginals(&self, n: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); n];
        for (b, w) in &self.weights {
            for e in b.iter() {
                if e < n {
                    out[e] += w;
                }
            }
        }
        out
    }

    /// Scales the measure to total mass one; the zero measure is returned unchanged.
    pub fn normalized(&self) -> Self {
        let total = self.total();
        if total.is_zero() {
            return self.clone();
        }
        BasisMeasure { weights: self.weights.iter().map(|(b, w)| (*b, w / &total)).collect() }
    }

    pub fn support(&self) -> impl Iterator<Item = Subset> + '_ {
        self.weights.iter().filter(|(_, w)| !w.is_zero()).map(|(b, _)| *b)
    }

    /// True when every basis of `m` carries positive weight.
    pub fn has_full_support(&self, m: &Matroid) -> bool {
        m.bases().all(|b| self.weight(b).is_positive())
    }

    /// Whether `self` is a positive multiple of `other`.
    pub fn is_proportional_to(&self, other: &BasisMeasure) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        let strip = |m: &BasisMeasure| -> Vec<(Subset, Rational)> {
            m.weights.iter().filter(|(_, w)| !w.is_zero()).cloned().collect()
        };
        !self.total().is_zero() && strip(&a) == strip(&b)
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> =
            self.weights.iter().map(|(b, w)| format!("{b}:{}", format_rational(w))).collect();
        parts.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MeasureCheck {
    EUniform { marginal: Rational },
    /// First element pair (in index order) whose marginals differ.
    NotEUniform { first: usize, second: usize, marginals: Vec<Rational> },
}

impl MeasureCheck {
    pub fn is_e_uniform(&self) -> bool {
        matches!(self, MeasureCheck::EUniform { .. })
    }
}

pub fn verify_measure(m: &Matroid, mu: &BasisMeasure) -> Result<MeasureCheck, MeasureError> {
    for (b, w) in mu.weights() {
        if !m.is_basis(*b) {
            return Err(MeasureError::SupportMismatch(*b));
        }
        if w.is_negative() {
            return Err(MeasureError::NegativeWeight { basis: *b, weight: format_rational(w) });
        }
    }
    let marginals = mu.marginals(m.ground_size());
    let sum = marginals.iter().fold(Rational::zero(), |acc, v| acc + v);
    assert_eq!(sum, usize_rat(m.full_rank()) * mu.total(), "marginal sum identity failed");
    let Some(first) = marginals.first() else {
        return Ok(MeasureCheck::EUniform { marginal: Rational::zero() });
    };
    match marginals.iter().position(|v| v != first) {
        None => Ok(MeasureCheck::EUniform { marginal: first.clone() }),
        Some(second) => Ok(MeasureCheck::NotEUniform { first: 0, second, marginals }),
    }
}

fn check_cap(m: &Matroid, cap: usize) -> Result<(), MeasureError> {
    if m.basis_count() > cap {
        Err(MeasureError::TooManyBases { count: m.basis_count(), cap })
    } else {
        Ok(())
    }
}

/// Rows `Σ_{B∋e} x_B` for each element followed by the total-mass row.
fn marginal_system(m: &Matroid) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let n = m.ground_size();
    let target = if n == 0 {
        Rational::zero()
    } else {
        usize_rat(m.full_rank()) / usize_rat(n)
    };
    let bases: Vec<Subset> = m.bases().collect();
    let mut a = Vec::with_capacity(n + 1);
    let mut b = Vec::with_capacity(n + 1);
    for e in 0..n {
        a.push(bases.iter().map(|s| if s.contains(e) { usize_rat(1) } else { Rational::zero() }).collect());
        b.push(target.clone());
    }
    a.push(vec![usize_rat(1); bases.len()]);
    b.push(usize_rat(1));
    (a, b)
}

pub fn find_e_uniform_measure(m: &Matroid) -> Result<Option<BasisMeasure>, MeasureError> {
    find_e_uniform_measure_with(m, DEFAULT_BASIS_CAP)
}

/// A normalized E-uniform measure, or `None` when none exists.
pub fn find_e_uniform_measure_with(m: &Matroid, cap: usize) -> Result<Option<BasisMeasure>, MeasureError> {
    check_cap(m, cap)?;
    let (a, b) = marginal_system(m);
    let c = vec![Rational::zero(); m.basis_count()];
    match (LinearProgram { a, b, c }).solve() {
        LpOutcome::Optimal { x, .. } => Ok(Some(BasisMeasure::new(m.bases().zip(x)))),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("feasibility problem has a zero objective"),
    }
}

pub fn find_positive_measure(m: &Matroid) -> Result<Option<BasisMeasure>, MeasureError> {
    find_positive_measure_with(m, DEFAULT_BASIS_CAP)
}

/// Maximises the minimum weight of a normalized E-uniform measure; `None`
/// when that minimum cannot be made positive.
pub fn find_positive_measure_with(m: &Matroid, cap: usize) -> Result<Option<BasisMeasure>, MeasureError> {
    check_cap(m, cap)?;
    let (mut a, b) = marginal_system(m);
    // Columns: t followed by ν_B, with μ_B = t + ν_B.
    for row in a.iter_mut() {
        let count = row.iter().filter(|v| !v.is_zero()).count();
        row.insert(0, usize_rat(count));
    }
    let mut c = vec![Rational::zero(); m.basis_count() + 1];
    c[0] = usize_rat(1);
    match (LinearProgram { a, b, c }).solve() {
        LpOutcome::Optimal { x, value } if value.is_positive() => {
            let t = &x[0];
            Ok(Some(BasisMeasure::new(m.bases().zip(x[1..].iter().map(|v| v + t)))))
        }
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => unreachable!("the minimum weight is bounded by the total mass"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};
    use crate::matroid::{direct_sum, tadpole, Matroid};

    #[test]
    fn uniform_measure_marginals() {
        let u = Matroid::uniform(5, 3);
        let mu = BasisMeasure::constant(&u, int(1));
        assert_eq!(verify_measure(&u, &mu).unwrap(), MeasureCheck::EUniform { marginal: int(6) });
    }

    #[test]
    fn self_dual_half_measure() {
        let u = Matroid::uniform(4, 2);
        let a = Subset::from_indices(&[0, 1]);
        let mu = BasisMeasure::new([(a, rat(1, 2)), (u.ground_set().difference(a), rat(1, 2))]);
        assert_eq!(verify_measure(&u, &mu).unwrap(), MeasureCheck::EUniform { marginal: rat(1, 2) });
    }

    #[test]
    fn tadpole_measures_are_never_uniform() {
        let t = tadpole();
        let mu = BasisMeasure::new(t.bases().enumerate().map(|(i, b)| (b, int(i as i64 + 1))));
        assert!(!verify_measure(&t, &mu).unwrap().is_e_uniform());
        assert_eq!(find_e_uniform_measure(&t).unwrap(), None);
        assert_eq!(find_positive_measure(&t).unwrap(), None);
    }

    #[test]
    fn support_errors() {
        let t = tadpole();
        let bad = BasisMeasure::new([(Subset::from_indices(&[1, 2, 3]), int(1))]);
        assert!(matches!(verify_measure(&t, &bad), Err(MeasureError::SupportMismatch(_))));
        let neg = BasisMeasure::new([(Subset::from_indices(&[0, 1, 2]), int(-1))]);
        assert!(matches!(verify_measure(&t, &neg), Err(MeasureError::NegativeWeight { .. })));
        assert!(matches!(
            find_e_uniform_measure_with(&Matroid::uniform(5, 2), 3),
            Err(MeasureError::TooManyBases { count: 10, cap: 3 })
        ));
    }

    #[test]
    fn uniform_four_two() {
        let u = Matroid::uniform(4, 2);
        let mu = find_e_uniform_measure(&u).unwrap().unwrap();
        assert_eq!(verify_measure(&u, &mu).unwrap(), MeasureCheck::EUniform { marginal: rat(1, 2) });
        assert_eq!(mu.total(), int(1));
        let pos = find_positive_measure(&u).unwrap().unwrap();
        assert_eq!(pos, BasisMeasure::constant(&u, rat(1, 6)));
    }

    #[test]
    fn positive_measures() {
        let tri = Matroid::uniform(3, 2);
        assert_eq!(find_positive_measure(&tri).unwrap().unwrap(), BasisMeasure::constant(&tri, rat(1, 3)));
        let seg = Matroid::uniform(2, 1);
        let sum = direct_sum(&seg, &seg).unwrap();
        let mu = find_positive_measure(&sum).unwrap().unwrap();
        assert!(mu.has_full_support(&sum));
        assert_eq!(verify_measure(&sum, &mu).unwrap(), MeasureCheck::EUniform { marginal: rat(1, 2) });
        let boundary = Matroid::new(4, &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        assert!(find_e_uniform_measure(&boundary).unwrap().is_some());
        assert_eq!(find_positive_measure(&boundary).unwrap(), None);
    }

    #[test]
    fn proportional_measures() {
        let u = Matroid::uniform(3, 1);
        let a = BasisMeasure::constant(&u, int(2));
        let b = BasisMeasure::constant(&u, rat(1, 3));
        assert!(a.is_proportional_to(&b));
        assert!(!a.is_proportional_to(&BasisMeasure::default()));
    }
}
