use super::{full_mask, Matroid, MatroidError, MAX_GROUND_SIZE};

/// Complements every basis.
pub fn dual(m: &Matroid) -> Matroid {
    let full = full_mask(m.ground_size());
    Matroid::from_masks_unchecked(m.ground_size(), m.basis_masks().iter().map(|b| full & !b).collect())
}

/// Matroid union on a common ground set: the maximal sets `B1 ∪ B2`.
pub fn union(m1: &Matroid, m2: &Matroid) -> Result<Matroid, MatroidError> {
    if m1.ground_size() != m2.ground_size() {
        return Err(MatroidError::GroundSetMismatch(m1.ground_size(), m2.ground_size()));
    }
    let mut best = 0u32;
    let mut masks = Vec::new();
    for &b1 in m1.basis_masks() {
        for &b2 in m2.basis_masks() {
            let u = b1 | b2;
            let size = u.count_ones();
            if size > best {
                best = size;
                masks.clear();
            }
            if size == best {
                masks.push(u);
            }
        }
    }
    Ok(Matroid::from_masks_unchecked(m1.ground_size(), masks))
}

/// Matroid intersection `(M1* ∨ M2*)*`.
pub fn intersection(m1: &Matroid, m2: &Matroid) -> Result<Matroid, MatroidError> {
    Ok(dual(&union(&dual(m1), &dual(m2))?))
}

/// Direct sum; the elements of `m2` are shifted past those of `m1`.
pub fn direct_sum(m1: &Matroid, m2: &Matroid) -> Result<Matroid, MatroidError> {
    let n = m1.ground_size() + m2.ground_size();
    if n > MAX_GROUND_SIZE {
        return Err(MatroidError::GroundSetUnsupported(n));
    }
    let shift = m1.ground_size();
    let mut masks = Vec::with_capacity(m1.basis_count() * m2.basis_count());
    for &b1 in m1.basis_masks() {
        for &b2 in m2.basis_masks() {
            masks.push(b1 | b2 << shift);
        }
    }
    Ok(Matroid::from_masks_unchecked(n, masks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::{is_uniformly_dense, tadpole, Subset, Verdict};

    #[test]
    fn dual_of_uniform() {
        assert_eq!(dual(&Matroid::uniform(5, 2)), Matroid::uniform(5, 3));
        let t = tadpole();
        assert_eq!(dual(&dual(&t)), t);
    }

    #[test]
    fn self_dual() {
        let m = Matroid::uniform(4, 2);
        assert_eq!(dual(&m), m);
    }

    #[test]
    fn union_of_non_dense_is_dense() {
        let m = Matroid::new(3, &[vec![0, 1], vec![0, 2]]).unwrap();
        assert_eq!(is_uniformly_dense(&m).unwrap().verdict, Verdict::NotUniformlyDense);
        let u = union(&m, &m).unwrap();
        assert_eq!(u, Matroid::uniform(3, 3));
        assert_eq!(is_uniformly_dense(&u).unwrap().verdict, Verdict::UniformlyDense);
    }

    #[test]
    fn mismatched_ground_sets() {
        let err = union(&Matroid::uniform(3, 1), &Matroid::uniform(4, 1)).unwrap_err();
        assert_eq!(err, MatroidError::GroundSetMismatch(3, 4));
        assert!(intersection(&Matroid::uniform(3, 1), &Matroid::uniform(4, 1)).is_err());
    }

    #[test]
    fn intersection_of_uniform() {
        let u = Matroid::uniform(5, 4);
        assert_eq!(intersection(&u, &u).unwrap(), Matroid::uniform(5, 3));
        let v = Matroid::uniform(6, 2);
        assert_eq!(intersection(&v, &v).unwrap().full_rank(), 0);
    }

    #[test]
    fn direct_sum_blocks() {
        let s = direct_sum(&Matroid::uniform(3, 2), &Matroid::uniform(4, 3)).unwrap();
        assert_eq!(s.ground_size(), 7);
        assert_eq!(s.full_rank(), 5);
        assert_eq!(s.basis_count(), 12);
        let c = is_uniformly_dense(&s).unwrap();
        assert_eq!(c.verdict, Verdict::NotUniformlyDense);
        assert_eq!(c.violator.unwrap().subset, Subset::from_indices(&[0, 1, 2]));
        let even = direct_sum(&Matroid::uniform(4, 3), &Matroid::uniform(4, 3)).unwrap();
        assert_eq!(is_uniformly_dense(&even).unwrap().verdict, Verdict::UniformlyDense);
    }
}
