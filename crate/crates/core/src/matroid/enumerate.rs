use std::collections::BTreeSet;

use super::{permute_mask, Matroid};

/// All labelled matroids on `0..n`, built by single-element extension.
///
/// Every matroid on `n` elements deletes element `n-1` to a matroid on `n-1`
/// elements; the extension is either a coloop or adds bases `I + (n-1)` for a
/// family of independent `(k-1)`-sets `I`, which is then checked for exchange.
pub fn enumerate_matroids(n: usize) -> Vec<Matroid> {
    assert!(n <= 8, "labelled enumeration is limited to 8 elements");
    let mut level = vec![Matroid::from_masks_unchecked(0, vec![0])];
    for size in 1..=n {
        let new = size - 1;
        let mut next = Vec::new();
        for m in &level {
            let bases = m.basis_masks();
            next.push(Matroid::from_masks_unchecked(size, bases.iter().map(|b| b | 1 << new).collect()));
            let k = m.full_rank();
            if k == 0 {
                next.push(Matroid::from_masks_unchecked(size, bases.to_vec()));
                continue;
            }
            let mut candidates: Vec<u64> = Vec::new();
            super::for_each_k_subset(m.ground_size(), k - 1, |s| {
                if bases.iter().any(|b| b & s == s) {
                    candidates.push(s);
                }
            });
            assert!(candidates.len() <= 24, "too many extension candidates");
            for choice in 0u64..(1u64 << candidates.len()) {
                let mut masks = bases.to_vec();
                masks.extend(super::Subset::from_mask(choice).iter().map(|i| candidates[i] | 1 << new));
                let cand = Matroid::from_masks_unchecked(size, masks);
                if cand.check_exchange().is_ok() {
                    next.push(cand);
                }
            }
        }
        level = next;
    }
    level
}

/// Sorted basis masks minimised over all relabellings.
pub fn canonical_form(m: &Matroid) -> Vec<u64> {
    let n = m.ground_size();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<u64>> = None;
    loop {
        let mut image: Vec<u64> = m.basis_masks().iter().map(|&b| permute_mask(b, &perm)).collect();
        image.sort_unstable();
        if best.as_ref().is_none_or(|b| image < *b) {
            best = Some(image);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    let mut out = best.unwrap_or_default();
    out.insert(0, n as u64);
    out
}

pub fn is_isomorphic(a: &Matroid, b: &Matroid) -> bool {
    a.ground_size() == b.ground_size()
        && a.full_rank() == b.full_rank()
        && a.basis_count() == b.basis_count()
        && canonical_form(a) == canonical_form(b)
}

/// One representative per isomorphism class.
pub fn non_isomorphic_matroids(n: usize) -> Vec<Matroid> {
    let mut seen = BTreeSet::new();
    enumerate_matroids(n).into_iter().filter(|m| seen.insert(canonical_form(m))).collect()
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
