//! Weyl discriminants and modulus characters for elements of `GL(n, Q)`.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Matrix, Poly, Q};

/// Trial division bound used when factoring discriminant values.
pub const TRIAL_DIVISION_LIMIT: u64 = 1 << 20;

/// Square matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix(Matrix);

impl RationalMatrix {
    pub fn new(rows: Vec<Vec<Q>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::domain("matrix must be at least 1x1"));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::domain("matrix must be square"));
        }
        Ok(RationalMatrix(Matrix::from_rows(rows)?))
    }

    /// Entries given as `"num/den"` strings.
    pub fn from_strings<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s.as_ref())).collect())
            .collect::<Result<Vec<Vec<Q>>>>()?;
        RationalMatrix::new(parsed)
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix(Matrix::identity(n))
    }

    pub fn diagonal(entries: &[Q]) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        RationalMatrix(m)
    }

    pub fn n(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiscriminantValue {
    #[serde(serialize_with = "ser_q")]
    pub value: Q,
    #[serde(serialize_with = "ser_q")]
    pub abs_inf: Q,
    /// `v_p(value)` for every prime dividing the numerator or denominator
    /// that trial division found.
    pub p_valuations: BTreeMap<u64, i64>,
    /// Numerator and denominator cofactors left after trial division (1 when
    /// the factorization is complete).
    #[serde(serialize_with = "ser_pair")]
    pub unfactored: (BigUint, BigUint),
}

fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::exact::format_rational(x))
}

fn ser_pair<S: serde::Serializer>(
    x: &(BigUint, BigUint),
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&x.0.to_string())?;
    t.serialize_element(&x.1.to_string())?;
    t.end()
}

impl DiscriminantValue {
    fn from_value(value: Q) -> Self {
        let (num_f, num_rest) = trial_factor(value.numer().magnitude());
        let (den_f, den_rest) = trial_factor(value.denom().magnitude());
        let mut p_valuations: BTreeMap<u64, i64> = BTreeMap::new();
        for (p, e) in num_f {
            *p_valuations.entry(p).or_default() += e as i64;
        }
        for (p, e) in den_f {
            *p_valuations.entry(p).or_default() -= e as i64;
        }
        DiscriminantValue {
            abs_inf: value.abs(),
            value,
            p_valuations,
            unfactored: (num_rest, den_rest),
        }
    }

    pub fn fully_factored(&self) -> bool {
        self.unfactored.0.is_one() && self.unfactored.1.is_one()
    }

    /// `|value|_p = p^{-v_p(value)}`.
    pub fn abs_p(&self, p: u64) -> Q {
        p_adic_abs(&self.value, p)
    }
}

/// Factor by trial division up to [`TRIAL_DIVISION_LIMIT`]; a cofactor below
/// the square of the limit is prime and is absorbed.
fn trial_factor(n: &BigUint) -> (Vec<(u64, u32)>, BigUint) {
    let mut rest = n.clone();
    let mut out = Vec::new();
    if rest.is_zero() {
        return (out, rest);
    }
    let mut p = 2u64;
    while p <= TRIAL_DIVISION_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut e = 0;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let limit = BigUint::from(TRIAL_DIVISION_LIMIT);
        if rest <= &limit * &limit {
            out.push((rest.to_u64().expect("below 2^40"), 1));
            out.sort_unstable();
            rest = BigUint::one();
        }
    }
    (out, rest)
}

/// `v_p(x)` for nonzero rational `x`.
pub fn valuation(x: &Q, p: u64) -> i64 {
    assert!(!x.is_zero(), "valuation of zero");
    let bp = BigInt::from(p);
    let count = |n: &BigInt| {
        let mut n = n.clone();
        let mut e = 0i64;
        loop {
            let (q, r) = n.div_rem(&bp);
            if !r.is_zero() {
                return e;
            }
            n = q;
            e += 1;
        }
    };
    count(x.numer()) - count(x.denom())
}

/// `|x|_p = p^{-v_p(x)}`, with `|0|_p = 0`.
pub fn p_adic_abs(x: &Q, p: u64) -> Q {
    if x.is_zero() {
        return Q::zero();
    }
    let v = valuation(x, p);
    let pq = Q::from_integer(BigInt::from(p));
    if v >= 0 {
        pq.pow(-(v as i32))
    } else {
        pq.pow((-v) as i32)
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Matrix of `Ad(g): X -> g X g^{-1}` on `gl(n)` in the basis `E_{ij}`
/// ordered row-major.
pub fn adjoint_matrix(g: &RationalMatrix) -> Result<Matrix> {
    let gm = g.matrix();
    let inv = gm
        .inverse()
        .ok_or_else(|| Error::domain("matrix is not invertible"))?;
    let n = g.n();
    let mut ad = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if gm[(i, k)].is_zero() {
                    continue;
                }
                for l in 0..n {
                    ad[(i * n + j, k * n + l)] = &gm[(i, k)] * &inv[(l, j)];
                }
            }
        }
    }
    Ok(ad)
}

/// `D(g) = det(1 - Ad(g))` on `gl(n) / gl(n)_g` for semisimple invertible `g`,
/// computed as `q(1)` where `charpoly(Ad g) = (x - 1)^m q(x)` and `m` is the
/// centralizer dimension.
pub fn weyl_discriminant(gamma_s: &RationalMatrix) -> Result<DiscriminantValue> {
    let gm = gamma_s.matrix();
    if gm.det().is_zero() {
        return Err(Error::domain("matrix is not invertible"));
    }
    let squarefree: Poly = gm.charpoly().squarefree_part();
    if !gm.eval_poly(&squarefree).is_zero() {
        return Err(Error::domain(
            "matrix is not semisimple (minimal polynomial has repeated roots); pass its semisimple part",
        ));
    }
    let ad = adjoint_matrix(gamma_s)?;
    let n2 = ad.rows();
    let centralizer = n2 - ad.sub(&Matrix::identity(n2)).rank();
    let mut q = ad.charpoly();
    let one = Q::one();
    for _ in 0..centralizer {
        let (quot, rem) = q.deflate(&one);
        if !rem.is_zero() {
            return Err(Error::numeric(
                "eigenvalue 1 has algebraic multiplicity below the centralizer dimension",
            ));
        }
        q = quot;
    }
    let value = q.eval(&one);
    if value.is_zero() {
        return Err(Error::numeric(
            "eigenvalue 1 has algebraic multiplicity above the centralizer dimension",
        ));
    }
    Ok(DiscriminantValue::from_value(value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Place {
    Infinite,
    Prime(u64),
}

impl std::str::FromStr for Place {
    type Err = Error;

    fn from_str(s: &str) -> Result<Place> {
        match s.trim() {
            "inf" | "infinity" | "oo" | "∞" => Ok(Place::Infinite),
            t => t
                .parse::<u64>()
                .ok()
                .filter(|&p| is_prime(p))
                .map(Place::Prime)
                .ok_or_else(|| Error::Parse {
                    offset: 0,
                    message: format!("place {t:?} is neither 'inf' nor a prime"),
                }),
        }
    }
}

/// `delta_P(m) = |prod_{i<j} d_i^{n_j} d_j^{-n_i}|_v` for the standard block
/// parabolic of `GL(n)` with block sizes `n_i` and block determinants `d_i`.
pub fn modulus_character(block_sizes: &[usize], block_dets: &[Q], place: Place) -> Result<Q> {
    if block_sizes.len() != block_dets.len() {
        return Err(Error::domain("block sizes and determinants differ in length"));
    }
    if block_sizes.contains(&0) {
        return Err(Error::domain("block sizes must be positive"));
    }
    if block_dets.iter().any(Zero::is_zero) {
        return Err(Error::domain("block determinant is zero"));
    }
    if let Place::Prime(p) = place {
        if !is_prime(p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
    }
    let mut exponent = vec![0i64; block_sizes.len()];
    for i in 0..block_sizes.len() {
        for j in i + 1..block_sizes.len() {
            exponent[i] += block_sizes[j] as i64;
            exponent[j] -= block_sizes[i] as i64;
        }
    }
    let mut prod = Q::one();
    for (d, &e) in block_dets.iter().zip(&exponent) {
        prod *= d.pow(e as i32);
    }
    Ok(match place {
        Place::Infinite => prod.abs(),
        Place::Prime(p) => p_adic_abs(&prod, p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, q_frac};

    #[test]
    fn identity_and_central() {
        for n in 1..=3 {
            let d = weyl_discriminant(&RationalMatrix::identity(n)).unwrap();
            assert_eq!(d.value, q(1));
        }
        let d = weyl_discriminant(&RationalMatrix::diagonal(&[q(5), q(5)])).unwrap();
        assert_eq!(d.value, q(1));
    }

    #[test]
    fn diag_2_1() {
        let d = weyl_discriminant(&RationalMatrix::diagonal(&[q(2), q(1)])).unwrap();
        assert_eq!(d.value, q_frac(-1, 2));
        assert_eq!(d.abs_inf, q_frac(1, 2));
        assert_eq!(d.p_valuations.get(&2), Some(&-1));
        assert_eq!(d.abs_p(2), q(2));
    }

    #[test]
    fn rotation_is_semisimple() {
        // eigenvalues +-i: Ad has eigenvalues 1,1,-1,-1
        let m = RationalMatrix::new(vec![vec![q(0), q(-1)], vec![q(1), q(0)]]).unwrap();
        assert_eq!(weyl_discriminant(&m).unwrap().value, q(4));
    }

    #[test]
    fn rejects_bad_input() {
        let singular = RationalMatrix::diagonal(&[q(0), q(1)]);
        assert!(matches!(weyl_discriminant(&singular), Err(Error::Domain(_))));
        let jordan = RationalMatrix::new(vec![vec![q(1), q(1)], vec![q(0), q(1)]]).unwrap();
        assert!(matches!(weyl_discriminant(&jordan), Err(Error::Domain(_))));
        assert!(RationalMatrix::new(vec![vec![q(1), q(0)]]).is_err());
    }

    #[test]
    fn modulus_examples() {
        assert_eq!(modulus_character(&[3], &[q(7)], Place::Infinite).unwrap(), q(1));
        assert_eq!(
            modulus_character(&[1, 1], &[q(3), q(-5)], Place::Infinite).unwrap(),
            q_frac(3, 5)
        );
        assert_eq!(
            modulus_character(&[2, 1], &[q(6), q(2)], Place::Infinite).unwrap(),
            q_frac(6, 4)
        );
        assert_eq!(
            modulus_character(&[2, 1], &[q(6), q(2)], Place::Prime(2)).unwrap(),
            q(2)
        );
        assert!(modulus_character(&[1, 1], &[q(0), q(1)], Place::Infinite).is_err());
    }

    #[test]
    fn factoring() {
        let (f, rest) = trial_factor(&BigUint::from(360u32));
        assert_eq!(f, vec![(2, 3), (3, 2), (5, 1)]);
        assert!(rest.is_one());
        let big_prime = BigUint::from(1_000_000_007u64);
        let (f, rest) = trial_factor(&big_prime);
        assert_eq!(f, vec![(1_000_000_007, 1)]);
        assert!(rest.is_one());
    }

    #[test]
    fn place_parsing() {
        assert_eq!("inf".parse::<Place>().unwrap(), Place::Infinite);
        assert_eq!("7".parse::<Place>().unwrap(), Place::Prime(7));
        assert!("8".parse::<Place>().is_err());
    }
}
