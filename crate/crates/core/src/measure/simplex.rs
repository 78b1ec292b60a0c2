//! Exact two-phase simplex over the rationals with Bland's pivoting rule.

use num_traits::{One, Signed, Zero};

use crate::linalg::Rational;

/// `maximize c·x subject to A x = b, x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rational>, value: Rational },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v /= &p;
                }
            }
            self.rhs[r] /= &p;
        }
        let pivot_row = self.rows[r].clone();
        let pivot_rhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][col].clone();
            if factor.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        self.basis[r] = col;
    }

    /// Runs simplex iterations maximising `cost` over the allowed columns.
    fn optimize(&mut self, cost: &[Rational], allowed: usize) -> bool {
        loop {
            let reduced = |j: usize| -> Rational {
                let mut z = cost[j].clone();
                for (i, &bj) in self.basis.iter().enumerate() {
                    let a = &self.rows[i][j];
                    if !a.is_zero() && !cost[bj].is_zero() {
                        z -= &cost[bj] * a;
                    }
                }
                z
            };
            let entering = (0..allowed).find(|&j| !self.basis.contains(&j) && reduced(j).is_positive());
            let Some(col) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if a.is_positive() {
                    let ratio = &self.rhs[i] / a;
                    let replace = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if replace {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, col),
            }
        }
    }
}

impl LinearProgram {
    pub fn solve(&self) -> LpOutcome {
        let m = self.a.len();
        let n = self.c.len();
        assert_eq!(self.b.len(), m);
        assert!(self.a.iter().all(|row| row.len() == n));
        let total = n + m;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        for (i, (row, bi)) in self.a.iter().zip(&self.b).enumerate() {
            let flip = bi.is_negative();
            let mut full: Vec<Rational> = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
            full.extend((0..m).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
            rows.push(full);
            rhs.push(if flip { -bi } else { bi.clone() });
        }
        let mut t = Tableau { rows, rhs, basis: (n..total).collect() };

        let mut phase1 = vec![Rational::zero(); total];
        for v in phase1.iter_mut().skip(n) {
            *v = -Rational::one();
        }
        t.optimize(&phase1, total);
        let infeasibility: Rational = t
            .basis
            .iter()
            .zip(&t.rhs)
            .filter(|(&bj, _)| bj >= n)
            .fold(Rational::zero(), |acc, (_, v)| acc + v);
        if infeasibility.is_positive() {
            return LpOutcome::Infeasible;
        }

        // Drive remaining artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= n {
                match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                    Some(col) => {
                        t.pivot(r, col);
                        r += 1;
                    }
                    None => {
                        t.rows.remove(r);
                        t.rhs.remove(r);
                        t.basis.remove(r);
                    }
                }
            } else {
                r += 1;
            }
        }

        let mut cost = self.c.clone();
        cost.extend((0..m).map(|_| Rational::zero()));
        if !t.optimize(&cost, n) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); n];
        for (i, &bj) in t.basis.iter().enumerate() {
            if bj < n {
                x[bj] = t.rhs[i].clone();
            }
        }
        let value = x.iter().zip(&self.c).fold(Rational::zero(), |acc, (xi, ci)| acc + xi * ci);
        LpOutcome::Optimal { x, value }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int, rat};

    fn q(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn small_optimum() {
        // max x + y, x + 2y + s1 = 4, 3x + y + s2 = 6.
        let lp = LinearProgram {
            a: vec![q(&[1, 2, 1, 0]), q(&[3, 1, 0, 1])],
            b: q(&[4, 6]),
            c: q(&[1, 1, 0, 0]),
        };
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rat(14, 5));
                assert_eq!(x[0], rat(8, 5));
                assert_eq!(x[1], rat(6, 5));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let lp = LinearProgram { a: vec![q(&[1, 1])], b: q(&[-1]), c: q(&[0, 0]) };
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let lp = LinearProgram { a: vec![q(&[1, -1])], b: q(&[1]), c: q(&[1, 0]) };
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows() {
        let lp = LinearProgram {
            a: vec![q(&[1, 1, 1]), q(&[2, 2, 2]), q(&[1, 0, 0])],
            b: q(&[3, 6, 1]),
            c: q(&[0, 1, 0]),
        };
        match lp.solve() {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, int(2));
                assert_eq!(x, q(&[1, 2, 0]));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
