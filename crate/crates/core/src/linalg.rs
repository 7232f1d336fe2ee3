//! Exact integer and rational linear algebra.
//!
//! Everything here is exact: rationals are arbitrary-precision and kept in
//! lowest terms with a positive denominator (`num_rational` maintains the
//! invariant). The matrices that occur in this crate are tiny (at most the
//! number of rays of a fan, ~10), so plain Gaussian elimination over `Q` is
//! the right tool.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Rational from a numerator/denominator pair.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Determinant of a small integer matrix by cofactor expansion.
pub fn int_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = BigInt::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * int_det(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Index of the sublattice spanned by `vectors` inside its saturation.
///
/// For `k` linearly independent integer vectors in `Z^d` this is the gcd of
/// all maximal (`k x k`) minors; for `k = d` it reduces to `|det|`.
pub fn lattice_index(vectors: &[&[i64]]) -> Result<BigInt> {
    let k = vectors.len();
    if k == 0 {
        return Err(Error::RankDeficient);
    }
    let d = vectors[0].len();
    for v in vectors {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.len(),
            });
        }
    }
    if k > d {
        return Err(Error::RankDeficient);
    }
    let mut gcd = BigInt::zero();
    for cols in subsets(d, k) {
        let minor: Vec<Vec<BigInt>> = vectors
            .iter()
            .map(|v| cols.iter().map(|&c| BigInt::from(v[c])).collect())
            .collect();
        gcd = gcd.gcd(&int_det(&minor));
    }
    if gcd.is_zero() {
        return Err(Error::RankDeficient);
    }
    Ok(gcd.abs())
}

/// All `k`-element subsets of `0..n`, in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| rat_int(v)))
            .collect();
        Self::new(r, c, data).expect("consistent row lengths")
    }

    /// Matrix whose columns are the given integer vectors.
    pub fn from_int_columns(cols: &[&[i64]]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Self::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                *m.at_mut(i, j) = rat_int(v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }

    /// Exact determinant via Gaussian elimination.
    pub fn det(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.at(r, col).is_zero());
            let Some(pivot) = pivot else {
                return Ok(Rational::zero());
            };
            if pivot != col {
                m.swap_rows(pivot, col);
                det = -det;
            }
            let p = m.at(col, col).clone();
            det *= &p;
            for r in col + 1..n {
                let factor = m.at(r, col) / &p;
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let sub = &factor * m.at(col, c);
                    *m.at_mut(r, c) -= sub;
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form; returns the pivot column of each pivot row.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(p, row);
            let inv = self.at(row, col).clone();
            for c in col..self.cols {
                let v = self.at(row, c) / &inv;
                *self.at_mut(row, c) = v;
            }
            for r in 0..self.rows {
                if r == row || self.at(r, col).is_zero() {
                    continue;
                }
                let factor = self.at(r, col).clone();
                for c in col..self.cols {
                    let sub = &factor * self.at(row, c);
                    *self.at_mut(r, c) -= sub;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    /// Exact solution of `self * x = b`, or `None` if the system is
    /// inconsistent. Free variables, if any, are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let mut aug = Self::zero(self.rows, self.cols + 1);
        for (i, rhs) in b.iter().enumerate() {
            for j in 0..self.cols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.cols) = rhs.clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None); // pivot in the augmented column
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = aug.at(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Basis of the rational kernel, each vector scaled to a primitive
    /// integer vector whose first nonzero entry is positive.
    pub fn kernel_basis(&self) -> Vec<Vec<BigInt>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivot_set.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = -m.at(row, free).clone();
            }
            basis.push(primitive_integer(&v));
        }
        basis
    }
}

/// Scale a rational vector to a primitive integer vector with positive
/// first nonzero entry.
pub fn primitive_integer(v: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = gcd.gcd(x);
    }
    if !gcd.is_zero() && !gcd.is_one() {
        for x in &mut ints {
            *x /= &gcd;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.sign() == Sign::Minus {
            for x in &mut ints {
                *x = -x.clone();
            }
        }
    }
    ints
}
