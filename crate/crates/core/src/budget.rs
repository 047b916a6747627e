//! Exponent bookkeeping for the error terms with `T = beta log N`,
//! `R = C_n log N`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::Q;

/// Relative slack used when comparing floating exponents with `-k`.
pub const EXPONENT_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BudgetParams {
    pub k: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub c2: f64,
    pub c4: f64,
    pub cn: f64,
    pub c_prime: f64,
    pub beta: f64,
    pub b_conj: f64,
    pub m_nonarch: f64,
}

impl BudgetParams {
    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("lambda", self.lambda),
            ("C2", self.c2),
            ("C4", self.c4),
            ("Cn", self.cn),
            ("beta", self.beta),
        ];
        for (name, v) in pos {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        let nonneg = [
            ("k", self.k),
            ("c'", self.c_prime),
            ("b", self.b_conj),
            ("m", self.m_nonarch),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be nonnegative, got {v}")));
            }
        }
        if !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::domain("epsilon must lie in [0, 1)"));
        }
        Ok(())
    }

    /// The feasible point `beta = beta_max`, `lambda = lambda_min`.
    pub fn feasible(k: f64, c2: f64, c4: f64, cn: f64, epsilon: f64, c_prime: f64) -> Result<Self> {
        let beta = beta_max(c2, c4, cn, k)?;
        let lambda = lambda_min(k, beta, epsilon, c_prime)?;
        let p = BudgetParams {
            k,
            lambda,
            epsilon,
            c2,
            c4,
            cn,
            c_prime,
            beta,
            b_conj: 0.0,
            m_nonarch: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// `(T, R) = (beta ln N, C_n ln N)`.
    pub fn schedule(&self, level: u64) -> Result<(f64, f64)> {
        if level < 2 {
            return Err(Error::domain("level must be at least 2"));
        }
        let l = (level as f64).ln();
        Ok((self.beta * l, self.cn * l))
    }

    /// Power of `log N` in the total envelope, `b + m`.
    pub fn a_exponent(&self) -> f64 {
        self.b_conj + self.m_nonarch
    }
}

/// Largest `beta` with `-C4 Cn^2 / beta + C2 beta <= -k`.
pub fn beta_max(c2: f64, c4: f64, cn: f64, k: f64) -> Result<f64> {
    if !(c2 > 0.0 && c4 > 0.0 && cn > 0.0) || !(k >= 0.0) {
        return Err(Error::domain("need C2, C4, Cn > 0 and k >= 0"));
    }
    let p = 4.0 * c2 * c4 * cn * cn;
    // root of C2 b^2 + k b - C4 Cn^2, written without cancellation
    Ok(2.0 * c4 * cn * cn / (k + (k * k + p).sqrt()))
}

/// Smallest `lambda` with `lambda (1 - eps) beta >= k` and `lambda > c'`.
pub fn lambda_min(k: f64, beta: f64, epsilon: f64, c_prime: f64) -> Result<f64> {
    if !(beta > 0.0) || !(0.0..1.0).contains(&epsilon) || !(k >= 0.0) || !(c_prime >= 0.0) {
        return Err(Error::domain("need beta > 0, 0 <= eps < 1, k >= 0, c' >= 0"));
    }
    let from_k = k / ((1.0 - epsilon) * beta);
    Ok(from_k.max(c_prime * (1.0 + 1e-9)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Exponents {
    /// `-lambda (1 - eps) beta`
    pub e_spec: f64,
    /// `-C4 Cn^2 / beta + C2 beta`
    pub e1: f64,
    /// `-lambda beta`
    pub e2: f64,
    pub all_ok: bool,
}

pub fn exponents(p: &BudgetParams) -> Result<Exponents> {
    p.validate()?;
    let e_spec = -p.lambda * (1.0 - p.epsilon) * p.beta;
    let e1 = -p.c4 * p.cn * p.cn / p.beta + p.c2 * p.beta;
    let e2 = -p.lambda * p.beta;
    let limit = -p.k + EXPONENT_SLACK * p.k.max(1.0);
    Ok(Exponents {
        e_spec,
        e1,
        e2,
        all_ok: e_spec <= limit && e1 <= limit && e2 <= limit,
    })
}

/// `vol N^{-k} (ln N)^a`.
pub fn total_envelope(level: u64, k: f64, a: f64, vol: f64) -> Result<f64> {
    if level < 2 {
        return Err(Error::domain("total envelope needs N >= 2"));
    }
    if !(vol > 0.0) || !(a >= 0.0) || !k.is_finite() {
        return Err(Error::domain("need vol > 0 and a >= 0"));
    }
    let n = level as f64;
    Ok(vol * n.powf(-k) * n.ln().powf(a))
}

/// `a + b sqrt(d)` over the rationals, `d` fixed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticSurd {
    pub a: Q,
    pub b: Q,
    pub d: Q,
}

impl QuadraticSurd {
    pub fn rational(a: Q, d: Q) -> Self {
        QuadraticSurd { a, b: Q::zero(), d }
    }

    pub fn sqrt_d(d: Q) -> Self {
        QuadraticSurd {
            a: Q::zero(),
            b: Q::one(),
            d,
        }
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "surds over different fields");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        QuadraticSurd {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            d: self.d.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        QuadraticSurd {
            a: &self.a * &other.a + &self.b * &other.b * &self.d,
            b: &self.a * &other.b + &self.b * &other.a,
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        QuadraticSurd {
            a: &self.a * c,
            b: &self.b * c,
            d: self.d.clone(),
        }
    }

    /// `1 / (a + b sqrt d) = (a - b sqrt d) / (a^2 - b^2 d)`; `None` for 0.
    pub fn recip(&self) -> Option<Self> {
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        if norm.is_zero() {
            return None;
        }
        Some(QuadraticSurd {
            a: &self.a / &norm,
            b: -&self.b / &norm,
            d: self.d.clone(),
        })
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let f = |x: &Q| x.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * f(&self.d).sqrt()
    }
}

impl fmt::Display for QuadraticSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
    }
}

/// `beta_max` in `Q(sqrt(k^2 + 4 C2 C4 Cn^2))`.
pub fn beta_max_exact(c2: &Q, c4: &Q, cn: &Q, k: &Q) -> Result<QuadraticSurd> {
    if !(c2.is_positive() && c4.is_positive() && cn.is_positive()) || k.is_negative() {
        return Err(Error::domain("need C2, C4, Cn > 0 and k >= 0"));
    }
    let d = k * k + Q::from_integer(4.into()) * c2 * c4 * cn * cn;
    let num = QuadraticSurd::rational(-k.clone(), d.clone()).add(&QuadraticSurd::sqrt_d(d));
    Ok(num.scale(&(Q::one() / (Q::from_integer(2.into()) * c2))))
}

/// `e1 = -C4 Cn^2 / beta + C2 beta` evaluated exactly at a surd `beta`.
pub fn e1_exact(c2: &Q, c4: &Q, cn: &Q, beta: &QuadraticSurd) -> Result<QuadraticSurd> {
    let inv = beta
        .recip()
        .ok_or_else(|| Error::domain("beta must be nonzero"))?;
    Ok(inv.scale(&-(c4 * cn * cn)).add(&beta.scale(c2)))
}
