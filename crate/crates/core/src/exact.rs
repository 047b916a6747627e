//! Exact rational linear algebra and polynomial helpers.
//!
//! Everything here works over `BigRational`; no floating point is involved.
//! Matrices are dense and row-major, polynomials are coefficient vectors in
//! ascending degree order with no trailing zeros.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parse `"num/den"`, `"num"` or a leading-sign variant of either.
pub fn parse_rational(text: &str) -> Result<Q> {
    let bad = |offset: usize, message: &str| Error::Parse {
        offset,
        message: format!("{message} in rational {text:?}"),
    };
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (trimmed, None),
    };
    let num = BigInt::from_str(num.trim()).map_err(|_| bad(0, "bad numerator"))?;
    let den = match den {
        Some(d) => BigInt::from_str(d.trim())
            .map_err(|_| bad(text.find('/').map_or(0, |i| i + 1), "bad denominator"))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(bad(text.find('/').map_or(0, |i| i + 1), "zero denominator"));
    }
    Ok(Q::new(num, den))
}

/// Canonical `"num/den"` rendering (denominator always present and positive).
pub fn format_rational(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Dense row-major matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::domain("ragged matrix rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_integer_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.as_ref().iter().enumerate() {
                m[(i, j)] = q(v);
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Q>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].recip();
            for j in c..m.cols {
                let v = &m[(r, j)] * &inv;
                m[(r, j)] = v;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        let v = &m[(r, j)] * &f;
                        m[(i, j)] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : self * x = 0}`, one vector per row
    /// of the returned matrix.
    pub fn nullspace(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(free.len(), self.cols);
        for (k, &f) in free.iter().enumerate() {
            basis[(k, f)] = Q::one();
            for (i, &p) in pivots.iter().enumerate() {
                basis[(k, p)] = -r[(i, f)].clone();
            }
        }
        basis
    }

    pub fn det(&self) -> Q {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Q::zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det *= &pivot;
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] / &pivot;
                for j in c..n {
                    let v = &m[(c, j)] * &f;
                    m[(i, j)] -= v;
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = Q::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Some(inv)
    }

    /// Characteristic polynomial `det(x I - self)` via reduction to upper
    /// Hessenberg form followed by the standard determinant recurrence.
    pub fn charpoly(&self) -> Poly {
        assert!(self.is_square());
        let n = self.rows;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let Some(p) = (c + 1..n).find(|&i| !h[(i, c)].is_zero()) else {
                continue;
            };
            if p != c + 1 {
                h.swap_rows(p, c + 1);
                h.swap_cols(p, c + 1);
            }
            let t = h[(c + 1, c)].clone();
            for i in c + 2..n {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let u = &h[(i, c)] / &t;
                for j in 0..n {
                    let v = &h[(c + 1, j)] * &u;
                    h[(i, j)] -= v;
                }
                for j in 0..n {
                    let v = &h[(j, i)] * &u;
                    h[(j, c + 1)] += v;
                }
            }
        }

        // 1-indexed accessor to keep the recurrence readable.
        let at = |a: usize, b: usize| &h[(a - 1, b - 1)];
        let mut polys: Vec<Poly> = vec![Poly::one()];
        for m in 1..=n {
            let mut pm = polys[m - 1].mul(&Poly::new(vec![-at(m, m).clone(), Q::one()]));
            let mut t = Q::one();
            for i in 1..m {
                t *= at(m - i + 1, m - i);
                let c = &t * at(m - i, m);
                if !c.is_zero() {
                    pm = pm.sub(&polys[m - i - 1].scale(&c));
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }

    /// Evaluate a polynomial at this (square) matrix by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Matrix {
        let n = self.rows;
        let mut acc = Matrix::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of a set of integer vectors. Fraction-free elimination in `i128`,
/// falling back to rational arithmetic if an intermediate overflows.
pub fn integer_rank<R: AsRef<[i64]>>(vectors: &[R]) -> usize {
    let Some(first) = vectors.first() else {
        return 0;
    };
    let cols = first.as_ref().len();
    let mut m: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.as_ref().iter().map(|&x| x as i128).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..m.len() {
            if m[i][c] == 0 {
                continue;
            }
            let (a, b) = (m[rank][c], m[i][c]);
            let g = gcd_i128(a, b);
            let (fa, fb) = (a / g, b / g);
            for j in c..cols {
                let lhs = m[i][j].checked_mul(fa);
                let rhs = m[rank][j].checked_mul(fb);
                match (lhs, rhs) {
                    (Some(l), Some(r)) => match l.checked_sub(r) {
                        Some(v) => m[i][j] = v,
                        None => return Matrix::from_integer_rows(vectors).rank(),
                    },
                    _ => return Matrix::from_integer_rows(vectors).rank(),
                }
            }
            let g = m[i].iter().fold(0i128, |g, &x| gcd_i128(g, x));
            if g > 1 {
                m[i].iter_mut().for_each(|x| *x /= g);
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Univariate polynomial over the rationals, ascending coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn one() -> Self {
        Poly(vec![Q::one()])
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0
            .iter()
            .rev()
            .fold(Q::zero(), |acc, c| acc * x + c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let z = Q::zero();
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + other.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * q(i as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.0[dd].clone();
        let mut rem = self.0.clone();
        let mut quot = vec![Q::zero(); self.0.len().saturating_sub(dd).max(1)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = &rem[rem.len() - 1] / &lead;
            for (i, d) in divisor.0.iter().enumerate() {
                rem[k + i] -= &c * d;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            (a, b) = (b, r);
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.0.last() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    /// Synthetic division by `(x - root)`: quotient and remainder.
    pub fn deflate(&self, root: &Q) -> (Poly, Q) {
        if self.is_zero() {
            return (Poly::zero(), Q::zero());
        }
        let n = self.0.len();
        let mut quot = vec![Q::zero(); n - 1];
        let mut carry = Q::zero();
        for i in (0..n).rev() {
            let v = &self.0[i] + &carry * root;
            if i == 0 {
                return (Poly::new(quot), v);
            }
            quot[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Squarefree part `p / gcd(p, p')`, made monic.
    pub fn squarefree_part(&self) -> Poly {
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }
}

/// `|x|` as an exact rational.
pub fn abs(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        assert_eq!(parse_rational("-6/4").unwrap(), q_frac(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), q(7));
        assert_eq!(format_rational(&q_frac(-3, 2)), "-3/2");
        assert_eq!(format_rational(&q(5)), "5/1");
        assert!(matches!(parse_rational("1/0"), Err(Error::Parse { .. })));
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn charpoly_matches_determinant_expansion() {
        let a = Matrix::from_integer_rows(&[[2, 1, 0], [1, 3, 1], [0, 1, 4]]);
        let p = a.charpoly();
        // det(xI - A) evaluated at a few points against a direct determinant.
        for x in -3..=3 {
            let xi = Matrix::identity(3).scale(&q(x)).sub(&a);
            assert_eq!(p.eval(&q(x)), xi.det());
        }
        assert_eq!(p.degree(), Some(3));
    }

    #[test]
    fn charpoly_handles_zero_subdiagonal() {
        let a = Matrix::from_integer_rows(&[[1, 0, 0, 0], [0, 2, 0, 0], [5, 0, 3, 0], [0, 7, 0, 4]]);
        let p = a.charpoly();
        for x in -2..=5 {
            let xi = Matrix::identity(4).scale(&q(x)).sub(&a);
            assert_eq!(p.eval(&q(x)), xi.det());
        }
    }

    #[test]
    fn cayley_hamilton() {
        let a = Matrix::from_integer_rows(&[[0, 1, 2], [3, 0, -1], [1, 1, 1]]);
        assert!(a.eval_poly(&a.charpoly()).is_zero());
    }

    #[test]
    fn nullspace_and_rank() {
        let a = Matrix::from_integer_rows(&[[1, 2, 3], [2, 4, 6], [1, 0, 1]]);
        assert_eq!(a.rank(), 2);
        let ns = a.nullspace();
        assert_eq!(ns.rows(), 1);
        assert!(a.mul(&ns.transpose()).is_zero());
        assert_eq!(integer_rank(&[[1i64, 2, 3], [2, 4, 6], [1, 0, 1]]), 2);
        assert_eq!(integer_rank::<[i64; 2]>(&[]), 0);
    }

    #[test]
    fn inverse_round_trip() {
        let a = Matrix::from_integer_rows(&[[2, 1], [7, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert!(Matrix::from_integer_rows(&[[1, 2], [2, 4]]).inverse().is_none());
    }

    #[test]
    fn polynomial_division_and_deflation() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        let p = Poly::new(vec![q(2), q(-3), q(0), q(1)]);
        let (quot, rem) = p.deflate(&q(1));
        assert_eq!(rem, q(0));
        assert_eq!(quot, Poly::new(vec![q(-2), q(1), q(1)]));
        assert_eq!(p.squarefree_part(), Poly::new(vec![q(-2), q(1), q(1)]));
        let (d, r) = p.div_rem(&Poly::new(vec![q(2), q(1)]));
        assert!(r.is_zero());
        assert_eq!(d, Poly::new(vec![q(1), q(-2), q(1)]));
    }
}
