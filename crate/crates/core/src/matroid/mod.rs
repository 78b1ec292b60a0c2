//! Matroids given by an explicit list of bases.
//!
//! Elements are `0..n` with `n <= 64`; subsets are stored as bitmasks.

mod density;
mod enumerate;
mod ops;

use std::cmp::Ordering;
use std::fmt;

use crate::linalg::{usize_rat, Rational};

pub use density::{
    is_strictly_uniformly_dense, is_strictly_uniformly_dense_with, is_uniformly_dense,
    is_uniformly_dense_with, scan_densities, Certificate, DensityScan, RankTable, ScanOptions,
    Verdict, Violator, DEFAULT_SUBSET_CAP,
};
pub(crate) use density::{better, merge, verdict_certificate, Candidate, Tracker};
pub use enumerate::{canonical_form, enumerate_matroids, is_isomorphic, non_isomorphic_matroids};
pub use ops::{direct_sum, dual, intersection, union};

/// Largest supported ground set.
pub const MAX_GROUND_SIZE: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatroidError {
    #[error("a matroid needs at least one basis")]
    NoBases,
    #[error("ground set of size {0} exceeds the supported maximum of 64")]
    GroundSetUnsupported(usize),
    #[error("element {element} is outside the ground set 0..{n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("basis {0:?} lists an element twice")]
    DuplicateElement(Vec<usize>),
    #[error("bases {first:?} and {other:?} have different cardinalities")]
    UnequalCardinality { first: Subset, other: Subset },
    #[error("basis exchange fails for A = {a:?}, B = {b:?}, removing {element} from A")]
    ExchangeViolation { a: Subset, b: Subset, element: usize },
    #[error("ground set of size {n} exceeds the enumeration cap {cap}")]
    GroundSetTooLarge { n: usize, cap: usize },
    #[error("ground sets differ ({0} vs {1})")]
    GroundSetMismatch(usize, usize),
    #[error("density of the empty set is undefined")]
    EmptySubset,
    #[error("subset {0:?} has rank zero")]
    ZeroRank(Subset),
    #[error("{count} bases exceed the cap {cap}")]
    TooManyBases { count: usize, cap: usize },
}

/// A subset of the ground set, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u64) -> Self {
        Subset(mask)
    }

    /// Panics when an index is 64 or larger.
    pub fn from_indices(indices: &[usize]) -> Self {
        indices.iter().fold(Subset(0), |s, &i| {
            assert!(i < MAX_GROUND_SIZE, "element {i} does not fit in a subset");
            s.with(i)
        })
    }

    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GROUND_SIZE);
        Subset(full_mask(n))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        e < 64 && self.0 >> e & 1 == 1
    }

    pub fn with(self, e: usize) -> Self {
        Subset(self.0 | 1 << e)
    }

    pub fn without(self, e: usize) -> Self {
        Subset(self.0 & !(1 << e))
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Self {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Self {
        Subset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut m = self.0;
        std::iter::from_fn(move || {
            if m == 0 {
                None
            } else {
                let i = m.trailing_zeros() as usize;
                m &= m - 1;
                Some(i)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Indices shifted by `offset`, for one-indexed display.
    pub fn display_with_offset(self, offset: usize) -> String {
        let parts: Vec<String> = self.iter().map(|i| (i + offset).to_string()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with_offset(0))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with_offset(0))
    }
}

pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Density `|A| / rank(A)`; rank-zero sets have infinite density.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Density {
    Finite(Rational),
    Infinite,
}

impl Density {
    pub fn of(size: usize, rank: usize) -> Self {
        if rank == 0 {
            Density::Infinite
        } else {
            Density::Finite(usize_rat(size) / usize_rat(rank))
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Density::Finite(r) => Some(r),
            Density::Infinite => None,
        }
    }
}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Density::Finite(a), Density::Finite(b)) => a.cmp(b),
            (Density::Finite(_), Density::Infinite) => Ordering::Less,
            (Density::Infinite, Density::Finite(_)) => Ordering::Greater,
            (Density::Infinite, Density::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Density::Finite(r) => f.write_str(&crate::linalg::format_rational(r)),
            Density::Infinite => f.write_str("inf"),
        }
    }
}

/// Compares `a1/r1` with `a2/r2`, where a zero rank means infinity.
pub(crate) fn cmp_ratio(a1: usize, r1: usize, a2: usize, r2: usize) -> Ordering {
    match (r1, r2) {
        (0, 0) => Ordering::Equal,
        (0, _) => Ordering::Greater,
        (_, 0) => Ordering::Less,
        _ => (a1 as u128 * r2 as u128).cmp(&(a2 as u128 * r1 as u128)),
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<u64>,
}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("n", &self.n)
            .field("rank", &self.rank)
            .field("bases", &self.bases().collect::<Vec<_>>())
            .finish()
    }
}

impl Matroid {
    /// Builds a matroid after checking cardinalities and basis exchange.
    pub fn new(n: usize, bases: &[Vec<usize>]) -> Result<Self, MatroidError> {
        if n > MAX_GROUND_SIZE {
            return Err(MatroidError::GroundSetUnsupported(n));
        }
        let mut masks = Vec::with_capacity(bases.len());
        for basis in bases {
            let mut mask = 0u64;
            for &e in basis {
                if e >= n {
                    return Err(MatroidError::ElementOutOfRange { element: e, n });
                }
                if mask >> e & 1 == 1 {
                    return Err(MatroidError::DuplicateElement(basis.clone()));
                }
                mask |= 1 << e;
            }
            masks.push(mask);
        }
        Self::from_masks(n, masks)
    }

    pub fn from_subsets(n: usize, bases: &[Subset]) -> Result<Self, MatroidError> {
        if n > MAX_GROUND_SIZE {
            return Err(MatroidError::GroundSetUnsupported(n));
        }
        if let Some(e) = bases.iter().flat_map(|b| b.iter()).find(|&e| e >= n) {
            return Err(MatroidError::ElementOutOfRange { element: e, n });
        }
        Self::from_masks(n, bases.iter().map(|b| b.mask()).collect())
    }

    fn from_masks(n: usize, mut masks: Vec<u64>) -> Result<Self, MatroidError> {
        masks.sort_unstable();
        masks.dedup();
        let first = *masks.first().ok_or(MatroidError::NoBases)?;
        let rank = first.count_ones() as usize;
        if let Some(&other) = masks.iter().find(|m| m.count_ones() as usize != rank) {
            return Err(MatroidError::UnequalCardinality {
                first: Subset(first),
                other: Subset(other),
            });
        }
        let m = Matroid { n, rank, bases: masks };
        m.check_exchange()?;
        Ok(m)
    }

    /// Trusted constructor for basis families that are matroids by construction.
    pub(crate) fn from_masks_unchecked(n: usize, mut masks: Vec<u64>) -> Self {
        masks.sort_unstable();
        masks.dedup();
        debug_assert!(!masks.is_empty());
        let rank = masks[0].count_ones() as usize;
        Matroid { n, rank, bases: masks }
    }

    fn check_exchange(&self) -> Result<(), MatroidError> {
        for &a in &self.bases {
            for &b in &self.bases {
                let only_a = a & !b;
                let only_b = b & !a;
                for x in Subset(only_a).iter() {
                    let reduced = a & !(1 << x);
                    let ok = Subset(only_b).iter().any(|y| self.is_basis_mask(reduced | 1 << y));
                    if !ok {
                        return Err(MatroidError::ExchangeViolation {
                            a: Subset(a),
                            b: Subset(b),
                            element: x,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// The uniform matroid of rank `k` on `n` elements.
    pub fn uniform(n: usize, k: usize) -> Self {
        assert!(k <= n && n <= MAX_GROUND_SIZE);
        let mut masks = Vec::new();
        for_each_k_subset(n, k, |m| masks.push(m));
        Self::from_masks_unchecked(n, masks)
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn ground_set(&self) -> Subset {
        Subset::full(self.n)
    }

    /// Common cardinality of the bases.
    pub fn full_rank(&self) -> usize {
        self.rank
    }

    pub fn basis_count(&self) -> usize {
        self.bases.len()
    }

    /// Bases in increasing bitmask order.
    pub fn bases(&self) -> impl Iterator<Item = Subset> + '_ {
        self.bases.iter().map(|&m| Subset(m))
    }

    pub(crate) fn basis_masks(&self) -> &[u64] {
        &self.bases
    }

    pub fn is_basis(&self, s: Subset) -> bool {
        self.is_basis_mask(s.mask())
    }

    fn is_basis_mask(&self, m: u64) -> bool {
        self.bases.binary_search(&m).is_ok()
    }

    /// Position of a basis in the canonical (sorted) order.
    pub fn basis_index(&self, s: Subset) -> Option<usize> {
        self.bases.binary_search(&s.mask()).ok()
    }

    pub fn rank(&self, a: Subset) -> usize {
        let bound = a.len().min(self.rank);
        let mut best = 0;
        for &b in &self.bases {
            let r = (b & a.mask()).count_ones() as usize;
            if r > best {
                best = r;
                if best == bound {
                    break;
                }
            }
        }
        best
    }

    pub fn is_independent(&self, a: Subset) -> bool {
        self.rank(a) == a.len()
    }

    pub fn density(&self, a: Subset) -> Result<Rational, MatroidError> {
        if a.is_empty() {
            return Err(MatroidError::EmptySubset);
        }
        match self.rank(a) {
            0 => Err(MatroidError::ZeroRank(a)),
            r => Ok(usize_rat(a.len()) / usize_rat(r)),
        }
    }

    /// Density of `a` with rank-zero sets mapped to infinity.
    pub fn density_value(&self, a: Subset) -> Density {
        Density::of(a.len(), self.rank(a))
    }

    /// Density of the whole ground set.
    pub fn matroid_density(&self) -> Density {
        Density::of(self.n, self.rank)
    }

    pub fn loops(&self) -> Subset {
        let union = self.bases.iter().fold(0u64, |acc, b| acc | b);
        Subset(full_mask(self.n) & !union)
    }

    pub fn coloops(&self) -> Subset {
        Subset(self.bases.iter().fold(full_mask(self.n), |acc, b| acc & b))
    }

    /// Fundamental circuit of `e` with respect to basis `b` (`e` not in `b`).
    pub fn fundamental_circuit(&self, b: Subset, e: usize) -> Subset {
        debug_assert!(!b.contains(e));
        let mut circuit = Subset::EMPTY.with(e);
        for f in b.iter() {
            if self.is_basis(b.without(f).with(e)) {
                circuit = circuit.with(f);
            }
        }
        circuit
    }

    /// Connected components, each as a subset, ordered by smallest element.
    pub fn connected_components(&self) -> Vec<Subset> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut root = x;
            while parent[root] != root {
                root = parent[root];
            }
            let mut cur = x;
            while parent[cur] != root {
                let next = parent[cur];
                parent[cur] = root;
                cur = next;
            }
            root
        }
        let b = Subset(self.bases[0]);
        for e in Subset::full(self.n).difference(b).iter() {
            let circuit = self.fundamental_circuit(b, e);
            for f in circuit.iter() {
                let (rf, re) = (find(&mut parent, f), find(&mut parent, e));
                if rf != re {
                    parent[rf.max(re)] = rf.min(re);
                }
            }
        }
        let mut groups: Vec<u64> = vec![0; self.n];
        for e in 0..self.n {
            let r = find(&mut parent, e);
            groups[r] |= 1 << e;
        }
        groups.into_iter().filter(|&g| g != 0).map(Subset).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() <= 1
    }

    /// Restriction to the subset `a`, relabelled to `0..|a|` in increasing order.
    pub fn restrict(&self, a: Subset) -> Matroid {
        let r = self.rank(a);
        let idx = a.indices();
        let mut masks: Vec<u64> = self
            .bases
            .iter()
            .filter(|&&b| (b & a.mask()).count_ones() as usize == r)
            .map(|&b| compress(b & a.mask(), &idx))
            .collect();
        masks.sort_unstable();
        masks.dedup();
        Matroid::from_masks_unchecked(idx.len(), masks)
    }

    /// Applies `perm` (element `e` becomes `perm[e]`).
    pub fn relabel(&self, perm: &[usize]) -> Matroid {
        assert_eq!(perm.len(), self.n);
        let masks = self.bases.iter().map(|&b| permute_mask(b, perm)).collect();
        Matroid::from_masks_unchecked(self.n, masks)
    }
}

pub(crate) fn compress(mask: u64, idx: &[usize]) -> u64 {
    idx.iter()
        .enumerate()
        .filter(|(_, &e)| mask >> e & 1 == 1)
        .fold(0u64, |acc, (i, _)| acc | 1 << i)
}

pub(crate) fn permute_mask(mask: u64, perm: &[usize]) -> u64 {
    Subset(mask).iter().fold(0u64, |acc, e| acc | 1 << perm[e])
}

/// Calls `f` on every `k`-subset of `0..n` in increasing mask order.
pub fn for_each_k_subset(n: usize, k: usize, mut f: impl FnMut(u64)) {
    if k > n {
        return;
    }
    if k == 0 {
        f(0);
        return;
    }
    let limit = full_mask(n);
    let mut m: u64 = full_mask(k);
    loop {
        f(m);
        let c = m & m.wrapping_neg();
        let r = m.wrapping_add(c);
        if r == 0 || r > limit {
            break;
        }
        m = (((r ^ m) >> 2) / c) | r;
        if m > limit {
            break;
        }
    }
}

/// The tadpole matroid on four elements: element 0 is a coloop, 1,2,3 form a triangle.
pub fn tadpole() -> Matroid {
    Matroid::new(4, &[vec![0, 1, 2], vec![0, 2, 3], vec![0, 1, 3]]).expect("tadpole is a matroid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(Matroid::new(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).is_ok());
        assert!(matches!(
            Matroid::new(3, &[vec![0, 1], vec![2]]),
            Err(MatroidError::UnequalCardinality { .. })
        ));
        assert!(matches!(
            Matroid::new(4, &[vec![0, 1], vec![2, 3]]),
            Err(MatroidError::ExchangeViolation { .. })
        ));
        assert!(matches!(Matroid::new(3, &[]), Err(MatroidError::NoBases)));
        assert!(matches!(
            Matroid::new(3, &[vec![0, 3]]),
            Err(MatroidError::ElementOutOfRange { element: 3, n: 3 })
        ));
        assert!(matches!(Matroid::new(3, &[vec![1, 1]]), Err(MatroidError::DuplicateElement(_))));
    }

    #[test]
    fn tadpole_rank_and_density() {
        let t = tadpole();
        let tri = Subset::from_indices(&[1, 2, 3]);
        assert_eq!(t.rank(tri), 2);
        assert_eq!(t.rank(t.ground_set()), 3);
        assert_eq!(t.rank(Subset::EMPTY), 0);
        assert_eq!(t.density(tri).unwrap(), crate::linalg::rat(3, 2));
        assert_eq!(t.coloops(), Subset::from_indices(&[0]));
        assert_eq!(t.loops(), Subset::EMPTY);
        assert_eq!(t.density(Subset::EMPTY), Err(MatroidError::EmptySubset));
    }

    #[test]
    fn uniform_density() {
        let u = Matroid::uniform(5, 3);
        assert_eq!(u.basis_count(), 10);
        assert_eq!(u.density(u.ground_set()).unwrap(), crate::linalg::rat(5, 3));
        assert_eq!(Matroid::uniform(4, 4).density(Subset::full(4)).unwrap(), crate::linalg::int(1));
        assert_eq!(u.loops(), Subset::EMPTY);
        assert_eq!(u.coloops(), Subset::EMPTY);
        assert_eq!(Matroid::uniform(3, 3).coloops(), Subset::full(3));
    }

    #[test]
    fn loop_density_is_an_error() {
        let m = Matroid::new(2, &[vec![0]]).unwrap();
        assert_eq!(m.loops(), Subset::from_indices(&[1]));
        assert!(matches!(m.density(Subset::from_indices(&[1])), Err(MatroidError::ZeroRank(_))));
    }

    #[test]
    fn components() {
        let t = tadpole();
        assert_eq!(
            t.connected_components(),
            vec![Subset::from_indices(&[0]), Subset::from_indices(&[1, 2, 3])]
        );
        assert_eq!(Matroid::uniform(5, 3).connected_components(), vec![Subset::full(5)]);
        let s = direct_sum(&Matroid::uniform(3, 2), &Matroid::uniform(2, 1)).unwrap();
        assert_eq!(
            s.connected_components(),
            vec![Subset::from_indices(&[0, 1, 2]), Subset::from_indices(&[3, 4])]
        );
    }

    #[test]
    fn k_subsets() {
        let mut v = Vec::new();
        for_each_k_subset(5, 2, |m| v.push(m));
        assert_eq!(v.len(), 10);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        let mut all = 0;
        for_each_k_subset(64, 1, |_| all += 1);
        assert_eq!(all, 64);
        let mut top = Vec::new();
        for_each_k_subset(64, 64, |m| top.push(m));
        assert_eq!(top, vec![u64::MAX]);
    }

    #[test]
    fn restriction() {
        let t = tadpole();
        let r = t.restrict(Subset::from_indices(&[1, 2, 3]));
        assert_eq!(r, Matroid::uniform(3, 2));
    }
}
