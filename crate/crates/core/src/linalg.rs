//! Exact rational matrices.
//!
//! Ranks and determinants are computed by fraction-free (Bareiss) elimination
//! on an integer-scaled copy of the matrix. The elimination runs in checked
//! `i128` arithmetic first and restarts over `BigInt` if any step overflows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn usize_rat(value: usize) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn format_rational(value: &Rational) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse `{0}` as a rational number")]
pub struct ParseRationalError(pub String);

/// Parses `p`, `p/q` or a finite decimal such as `-0.125` or `1e-3` exactly.
pub fn parse_rational(text: &str) -> Result<Rational, ParseRationalError> {
    let s = text.trim();
    let err = || ParseRationalError(text.to_string());
    if s.is_empty() {
        return Err(err());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| err())?;
        let q: BigInt = q.trim().parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let e: i32 = s[pos + 1..].parse().map_err(|_| err())?;
            (&s[..pos], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(err());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(err());
    }
    let all: String = format!("{whole}{frac}");
    let mut numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| err())? };
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or_else(|| {
        // Huge numerators and denominators: divide in scaled integer form.
        let n = value.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = value.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Best rational approximation with denominator at most `max_denom`.
pub fn approximate_rational(x: f64, max_denom: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let negative = x < 0.0;
    let mut r = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0u128, 1u128, 1u128, 0u128);
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e18 {
            break;
        }
        let a_int = a as u128;
        let p2 = a_int * p1 + p0;
        let q2 = a_int * q1 + q0;
        if q2 > max_denom as u128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = r - a;
        if frac < 1e-15 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let mut value = Rational::new(BigInt::from(p1), BigInt::from(q1));
    if negative {
        value = -value;
    }
    Some(value)
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format_rational(self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        Self::new(rows, cols, values.iter().map(|&v| int(v)).collect())
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * other.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        QMatrix::new(self.rows, self.cols, data)
    }

    /// Multiplies column `c` by `scale[c]`.
    pub fn scale_columns(&self, scale: &[Rational]) -> QMatrix {
        assert_eq!(scale.len(), self.cols);
        let mut out = self.clone();
        for r in 0..self.rows {
            for (c, s) in scale.iter().enumerate() {
                out.data[r * self.cols + c] *= s;
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> QMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.set(r, j, self.get(r, c).clone());
            }
        }
        out
    }

    /// Principal submatrix on the index set `idx`.
    pub fn principal(&self, idx: &[usize]) -> QMatrix {
        let mut out = Self::zeros(idx.len(), idx.len());
        for (i, &r) in idx.iter().enumerate() {
            for (j, &c) in idx.iter().enumerate() {
                out.set(i, j, self.get(r, c).clone());
            }
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| (r + 1..self.cols).all(|c| self.get(r, c) == self.get(c, r)))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn diagonal(&self) -> Vec<Rational> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn trace(&self) -> Rational {
        self.diagonal().into_iter().fold(Rational::zero(), |acc, v| acc + v)
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|r| self.row(r).iter().map(to_f64).collect()).collect()
    }

    pub fn rank(&self) -> usize {
        self.eliminate().rank
    }

    pub fn det(&self) -> Rational {
        assert!(self.is_square(), "determinant of a non-square matrix");
        if self.rows == 0 {
            return Rational::one();
        }
        let result = self.eliminate();
        if result.rank < self.rows {
            return Rational::zero();
        }
        Rational::new(result.det, result.row_scale)
    }

    /// Inverse by Gauss-Jordan elimination, `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a.get(col, col).clone();
            for c in 0..n {
                let v = a.get(col, c) / &p;
                a.set(col, c, v);
                let v = inv.get(col, c) / &p;
                inv.set(col, c, v);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = a.get(r, c) - &factor * a.get(col, c);
                    a.set(r, c, v);
                    let v = inv.get(r, c) - &factor * inv.get(col, c);
                    inv.set(r, c, v);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Integer rows obtained by clearing each row's denominators, together
    /// with the product of the row multipliers.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut total = BigInt::one();
        let rows = (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                total *= &lcm;
                row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
            })
            .collect();
        (rows, total)
    }

    fn eliminate(&self) -> Elimination {
        let (rows, row_scale) = self.integer_rows();
        let small: Option<Vec<Vec<i128>>> = rows
            .iter()
            .map(|row| row.iter().map(|v| v.to_i128()).collect::<Option<Vec<_>>>())
            .collect();
        if let Some(small) = small {
            if let Some((rank, det)) = bareiss_i128(small, self.cols) {
                return Elimination { rank, det: BigInt::from(det), row_scale };
            }
        }
        let (rank, det) = bareiss_big(rows, self.cols);
        Elimination { rank, det, row_scale }
    }
}

struct Elimination {
    rank: usize,
    /// Determinant of the integer-scaled matrix (meaningful for full-rank square input).
    det: BigInt,
    row_scale: BigInt,
}

fn bareiss_i128(mut m: Vec<Vec<i128>>, cols: usize) -> Option<(usize, i128)> {
    let rows = m.len();
    let mut prev: i128 = 1;
    let mut rank = 0;
    let mut sign: i128 = 1;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            sign = -sign;
        }
        let p = m[rank][col];
        for r in rank + 1..rows {
            let lead = m[r][col];
            for c in col + 1..cols {
                let v = p.checked_mul(m[r][c])?.checked_sub(lead.checked_mul(m[rank][c])?)?;
                m[r][c] = v / prev;
            }
            m[r][col] = 0;
        }
        prev = p;
        rank += 1;
    }
    Some((rank, sign * prev))
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>, cols: usize) -> (usize, BigInt) {
    let rows = m.len();
    let mut prev = BigInt::one();
    let mut rank = 0;
    let mut negative = false;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            m.swap(pivot, rank);
            negative = !negative;
        }
        let p = m[rank][col].clone();
        for r in rank + 1..rows {
            let lead = m[r][col].clone();
            if lead.is_zero() {
                for c in col + 1..cols {
                    let v = &p * &m[r][c];
                    m[r][c] = v / &prev;
                }
            } else {
                for c in col + 1..cols {
                    let v = &p * &m[r][c] - &lead * &m[rank][c];
                    m[r][c] = v / &prev;
                }
            }
            m[r][col] = BigInt::zero();
        }
        prev = p;
        rank += 1;
    }
    let det = if negative { -prev } else { prev };
    (rank, det)
}

/// Sign-agnostic absolute value helper for reports.
pub fn abs(value: &Rational) -> Rational {
    value.abs()
}
