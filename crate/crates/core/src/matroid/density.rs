use std::cmp::Ordering;
use std::fmt;

use super::{cmp_ratio, Density, Matroid, MatroidError, Subset};
use crate::measure::BasisMeasure;

pub const DEFAULT_SUBSET_CAP: usize = 24;

/// Limits for exhaustive subset enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    pub subset_cap: usize,
    pub threads: usize,
}

impl Default for ScanOptions {
    /// Reads `UDM_SUBSET_CAP` when set.
    fn default() -> Self {
        let subset_cap = std::env::var("UDM_SUBSET_CAP")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&c: &usize| c > 0)
            .unwrap_or(DEFAULT_SUBSET_CAP);
        ScanOptions { subset_cap, threads: 1 }
    }
}

impl ScanOptions {
    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.subset_cap = cap;
        self
    }

    pub fn check(&self, n: usize) -> Result<(), MatroidError> {
        if n > self.subset_cap || n > 40 {
            Err(MatroidError::GroundSetTooLarge { n, cap: self.subset_cap.min(40) })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    UniformlyDense,
    StrictlyUniformlyDense,
    NotUniformlyDense,
    UniformlyDenseNotStrict,
}

impl Verdict {
    pub fn is_uniformly_dense(self) -> bool {
        !matches!(self, Verdict::NotUniformlyDense)
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Verdict::StrictlyUniformlyDense)
    }

    pub fn name(self) -> &'static str {
        match self {
            Verdict::UniformlyDense => "UniformlyDense",
            Verdict::StrictlyUniformlyDense => "StrictlyUniformlyDense",
            Verdict::NotUniformlyDense => "NotUniformlyDense",
            Verdict::UniformlyDenseNotStrict => "UniformlyDenseNotStrict",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        [
            Verdict::UniformlyDense,
            Verdict::StrictlyUniformlyDense,
            Verdict::NotUniformlyDense,
            Verdict::UniformlyDenseNotStrict,
        ]
        .into_iter()
        .find(|v| v.name() == text)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violator {
    pub subset: Subset,
    pub size: usize,
    pub rank: usize,
    pub density: Density,
}

impl Violator {
    pub fn new(subset: Subset, rank: usize) -> Self {
        Violator { subset, size: subset.len(), rank, density: Density::of(subset.len(), rank) }
    }
}

/// Outcome of a uniform-density check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub verdict: Verdict,
    /// Density of the whole ground set.
    pub density: Density,
    /// Densest subset above `density` (not UD), or a non-component subset attaining it (not strict).
    pub violator: Option<Violator>,
    pub witness: Option<BasisMeasure>,
}

/// Ranks of all `2^n` subsets, computed from the bases by subset-sum closure.
pub struct RankTable {
    n: usize,
    ranks: Vec<u8>,
}

impl RankTable {
    pub fn new(m: &Matroid, options: &ScanOptions) -> Result<Self, MatroidError> {
        let n = m.ground_size();
        options.check(n)?;
        let size = 1usize << n;
        let mut ranks = vec![0u8; size];
        for &b in m.basis_masks() {
            ranks[b as usize] = 1;
        }
        for i in 0..n {
            let bit = 1usize << i;
            for mask in 0..size {
                if mask & bit != 0 && ranks[mask] != 0 {
                    ranks[mask ^ bit] = 1;
                }
            }
        }
        for (mask, r) in ranks.iter_mut().enumerate() {
            *r = if *r != 0 { mask.count_ones() as u8 } else { 0 };
        }
        for i in 0..n {
            let bit = 1usize << i;
            for mask in 0..size {
                if mask & bit != 0 {
                    let sub = ranks[mask ^ bit];
                    if sub > ranks[mask] {
                        ranks[mask] = sub;
                    }
                }
            }
        }
        Ok(RankTable { n, ranks })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn rank(&self, s: Subset) -> usize {
        self.ranks[s.mask() as usize] as usize
    }
}

/// Result of scanning every nonempty subset against the density of the ground set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityScan {
    pub ground_rank: usize,
    /// Canonical subset of maximal density above the ground-set density.
    pub violator: Option<Violator>,
    /// Canonical non-component-union subset attaining the ground-set density.
    pub boundary: Option<Violator>,
}

#[derive(Clone, Copy)]
pub(crate) struct Candidate {
    pub mask: u64,
    pub size: usize,
    pub rank: usize,
}

/// Maximal density first, then smaller cardinality, then smaller mask.
pub(crate) fn better(a: &Candidate, b: &Candidate) -> bool {
    match cmp_ratio(a.size, a.rank, b.size, b.rank) {
        Ordering::Greater => true,
        Ordering::Less => false,
        Ordering::Equal => (a.size, a.mask) < (b.size, b.mask),
    }
}

fn smaller(a: &Candidate, b: &Candidate) -> bool {
    (a.size, a.mask) < (b.size, b.mask)
}

pub(crate) fn merge(slot: &mut Option<Candidate>, c: Candidate, prefer: fn(&Candidate, &Candidate) -> bool) {
    match slot {
        Some(cur) if !prefer(&c, cur) => {}
        _ => *slot = Some(c),
    }
}

/// Collects the canonical violator and boundary set among offered subsets.
#[derive(Clone)]
pub(crate) struct Tracker<'a> {
    n: usize,
    ground_rank: usize,
    components: Option<&'a [u64]>,
    violator: Option<Candidate>,
    boundary: Option<Candidate>,
}

impl<'a> Tracker<'a> {
    pub fn new(n: usize, ground_rank: usize, components: Option<&'a [u64]>) -> Self {
        Tracker { n, ground_rank, components, violator: None, boundary: None }
    }

    pub fn offer(&mut self, mask: u64, size: usize, rank: usize) {
        let c = Candidate { mask, size, rank };
        match cmp_ratio(size, rank, self.n, self.ground_rank) {
            Ordering::Greater => merge(&mut self.violator, c, better),
            Ordering::Equal => {
                if let Some(comps) = self.components {
                    if !is_component_union(mask, comps) {
                        merge(&mut self.boundary, c, smaller);
                    }
                }
            }
            Ordering::Less => {}
        }
    }

    pub fn absorb(&mut self, other: Tracker<'_>) {
        if let Some(v) = other.violator {
            merge(&mut self.violator, v, better);
        }
        if let Some(b) = other.boundary {
            merge(&mut self.boundary, b, smaller);
        }
    }

    pub fn finish(self) -> DensityScan {
        let to_violator = |c: Candidate| Violator::new(Subset::from_mask(c.mask), c.rank);
        DensityScan {
            ground_rank: self.ground_rank,
            violator: self.violator.map(to_violator),
            boundary: self.boundary.map(to_violator),
        }
    }
}

fn is_component_union(mask: u64, components: &[u64]) -> bool {
    components.iter().all(|&c| {
        let part = mask & c;
        part == 0 || part == c
    })
}

/// Scans all nonempty subsets of `0..n` with the supplied rank function.
///
/// When `components` is given, subsets attaining the ground-set density that are
/// not unions of components are reported as `boundary`.
pub fn scan_densities<F>(
    n: usize,
    rank: F,
    components: Option<&[Subset]>,
    options: &ScanOptions,
) -> Result<DensityScan, MatroidError>
where
    F: Fn(u64) -> usize + Sync,
{
    options.check(n)?;
    let ground_rank = rank(super::full_mask(n));
    let comps: Option<Vec<u64>> = components.map(|c| c.iter().map(|s| s.mask()).collect());
    let parts = crate::parallel::chunked(1u64 << n, options.threads, |lo, hi| {
        let mut t = Tracker::new(n, ground_rank, comps.as_deref());
        for mask in lo..hi {
            t.offer(mask, mask.count_ones() as usize, rank(mask));
        }
        t
    });
    let mut total = Tracker::new(n, ground_rank, comps.as_deref());
    for p in parts {
        total.absorb(p);
    }
    Ok(total.finish())
}

pub fn is_uniformly_dense(m: &Matroid) -> Result<Certificate, MatroidError> {
    is_uniformly_dense_with(m, &ScanOptions::default())
}

pub fn is_uniformly_dense_with(m: &Matroid, options: &ScanOptions) -> Result<Certificate, MatroidError> {
    let table = RankTable::new(m, options)?;
    let scan = scan_densities(m.ground_size(), |mask| table.rank(Subset::from_mask(mask)), None, options)?;
    Ok(certificate_from_scan(m, scan, false))
}

pub fn is_strictly_uniformly_dense(m: &Matroid) -> Result<Certificate, MatroidError> {
    is_strictly_uniformly_dense_with(m, &ScanOptions::default())
}

pub fn is_strictly_uniformly_dense_with(
    m: &Matroid,
    options: &ScanOptions,
) -> Result<Certificate, MatroidError> {
    let table = RankTable::new(m, options)?;
    let components = m.connected_components();
    let scan = scan_densities(
        m.ground_size(),
        |mask| table.rank(Subset::from_mask(mask)),
        Some(&components),
        options,
    )?;
    Ok(certificate_from_scan(m, scan, true))
}

fn certificate_from_scan(m: &Matroid, scan: DensityScan, strict: bool) -> Certificate {
    verdict_certificate(m.matroid_density(), scan, strict)
}

pub(crate) fn verdict_certificate(density: Density, scan: DensityScan, strict: bool) -> Certificate {
    let (verdict, violator) = match (scan.violator, scan.boundary) {
        (Some(v), _) => (Verdict::NotUniformlyDense, Some(v)),
        (None, Some(b)) if strict => (Verdict::UniformlyDenseNotStrict, Some(b)),
        (None, _) if strict => (Verdict::StrictlyUniformlyDense, None),
        (None, _) => (Verdict::UniformlyDense, None),
    };
    Certificate { verdict, density, violator, witness: None }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::matroid::{direct_sum, tadpole};

    fn brute_rank(m: &Matroid, mask: u64) -> usize {
        m.rank(Subset::from_mask(mask))
    }

    #[test]
    fn rank_table_matches_direct_rank() {
        let m = direct_sum(&tadpole(), &Matroid::uniform(4, 2)).unwrap();
        let t = RankTable::new(&m, &ScanOptions::default()).unwrap();
        for mask in 0..(1u64 << m.ground_size()) {
            assert_eq!(t.rank(Subset::from_mask(mask)), brute_rank(&m, mask), "mask {mask:b}");
        }
    }

    #[test]
    fn tadpole_is_not_dense() {
        let c = is_uniformly_dense(&tadpole()).unwrap();
        assert_eq!(c.verdict, Verdict::NotUniformlyDense);
        let v = c.violator.unwrap();
        assert_eq!(v.subset, Subset::from_indices(&[1, 2, 3]));
        assert_eq!(v.density, Density::Finite(rat(3, 2)));
        assert_eq!(c.density, Density::Finite(rat(4, 3)));
        let s = is_strictly_uniformly_dense(&tadpole()).unwrap();
        assert_eq!(s.verdict, Verdict::NotUniformlyDense);
    }

    #[test]
    fn uniform_and_free_matroids_are_dense() {
        assert_eq!(is_uniformly_dense(&Matroid::uniform(5, 3)).unwrap().verdict, Verdict::UniformlyDense);
        assert_eq!(is_uniformly_dense(&Matroid::uniform(4, 4)).unwrap().verdict, Verdict::UniformlyDense);
        assert_eq!(
            is_strictly_uniformly_dense(&Matroid::uniform(5, 3)).unwrap().verdict,
            Verdict::StrictlyUniformlyDense
        );
    }

    #[test]
    fn component_unions_may_attain_equality() {
        let tri = Matroid::uniform(3, 2);
        let s = direct_sum(&tri, &tri).unwrap();
        assert_eq!(is_strictly_uniformly_dense(&s).unwrap().verdict, Verdict::StrictlyUniformlyDense);
    }

    #[test]
    fn boundary_case() {
        // A doubled point in U(3,2): the parallel pair attains the ground-set density.
        let m = Matroid::new(4, &[vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        assert_eq!(is_uniformly_dense(&m).unwrap().verdict, Verdict::UniformlyDense);
        let c = is_strictly_uniformly_dense(&m).unwrap();
        assert_eq!(c.verdict, Verdict::UniformlyDenseNotStrict);
        assert_eq!(c.violator.unwrap().subset, Subset::from_indices(&[0, 1]));
    }

    #[test]
    fn loops_make_positive_rank_matroids_not_dense() {
        let m = Matroid::new(2, &[vec![0]]).unwrap();
        let c = is_uniformly_dense(&m).unwrap();
        assert_eq!(c.verdict, Verdict::NotUniformlyDense);
        assert_eq!(c.violator.unwrap().density, Density::Infinite);
        let zero = Matroid::new(3, &[vec![]]).unwrap();
        assert_eq!(is_strictly_uniformly_dense(&zero).unwrap().verdict, Verdict::StrictlyUniformlyDense);
    }

    #[test]
    fn cap_is_enforced() {
        let m = Matroid::uniform(6, 1);
        let err = is_uniformly_dense_with(&m, &ScanOptions::default().with_cap(5)).unwrap_err();
        assert_eq!(err, MatroidError::GroundSetTooLarge { n: 6, cap: 5 });
    }

    #[test]
    fn threads_do_not_change_the_answer() {
        let m = direct_sum(&Matroid::uniform(6, 2), &Matroid::uniform(7, 3)).unwrap();
        let one = is_strictly_uniformly_dense_with(&m, &ScanOptions::default()).unwrap();
        let many = is_strictly_uniformly_dense_with(&m, &ScanOptions::default().with_threads(5)).unwrap();
        assert_eq!(one, many);
        assert_eq!(one.violator.unwrap().subset, Subset::from_indices(&[0, 1, 2, 3, 4, 5]));
    }
}
