//! Finite parts at `s = 0` of `M(s) / (s Γ(s))`, where
//! `M(s) = ∫_0^∞ f(t) t^{s-1} dt`, for functions with a known small-`t`
//! expansion and an exponential decay certificate.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::Q;
use crate::quadrature::integrate;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Default absolute tolerance for [`fp_mellin`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// `f(t) ~ sum a_i t^{alpha_i}` on `(0, t0]`, with remainder
/// `O(t^{alpha_max + rho})`.
#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticExpansion {
    terms: Vec<(Q, f64)>,
    t0: f64,
    remainder_order: Q,
}

impl AsymptoticExpansion {
    pub fn new(terms: Vec<(Q, f64)>, t0: f64, remainder_order: Q) -> Result<Self> {
        if !(t0 > 0.0 && t0.is_finite()) {
            return Err(Error::domain("split point t0 must be positive"));
        }
        if !remainder_order.is_positive() {
            return Err(Error::domain("remainder order must be positive"));
        }
        if terms.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::domain("exponents must be strictly increasing"));
        }
        if terms.iter().any(|(_, a)| !a.is_finite()) {
            return Err(Error::domain("coefficients must be finite"));
        }
        Ok(AsymptoticExpansion {
            terms,
            t0,
            remainder_order,
        })
    }

    pub fn terms(&self) -> &[(Q, f64)] {
        &self.terms
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn with_t0(&self, t0: f64) -> Result<Self> {
        AsymptoticExpansion::new(self.terms.clone(), t0, self.remainder_order.clone())
    }

    pub fn remainder_order(&self) -> &Q {
        &self.remainder_order
    }

    /// Exponent of the remainder, `alpha_max + rho` (`rho` when there are no terms).
    pub fn remainder_exponent(&self) -> Q {
        self.terms
            .last()
            .map_or_else(Q::zero, |(a, _)| a.clone())
            + &self.remainder_order
    }

    /// Sum of the terms with exponent in the given range.
    fn partial_sum(&self, t: f64, keep: impl Fn(&Q) -> bool) -> f64 {
        self.terms
            .iter()
            .filter(|(alpha, _)| keep(alpha))
            .map(|(alpha, a)| a * t.powf(to_f64(alpha)))
            .sum()
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.partial_sum(t, |_| true)
    }

    /// Least common multiple of the exponent denominators.
    fn denominator_lcm(&self) -> u64 {
        let mut l = self.remainder_order.denom().to_u64().unwrap_or(1);
        for (alpha, _) in &self.terms {
            l = l.lcm(&alpha.denom().to_u64().unwrap_or(1));
        }
        l.clamp(1, 64)
    }
}

fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A function of `t > 0` with `|f(t)| <= C e^{-lambda t}` for `t >= 1`.
#[derive(Clone)]
pub struct TailFunction {
    f: Evaluator,
    c: f64,
    lambda: f64,
}

impl fmt::Debug for TailFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TailFunction")
            .field("c", &self.c)
            .field("lambda", &self.lambda)
            .finish_non_exhaustive()
    }
}

impl TailFunction {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, c: f64, lambda: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) || !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::domain("decay constants C and lambda must be positive"));
        }
        Ok(TailFunction {
            f: Arc::new(f),
            c,
            lambda,
        })
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn decay(&self) -> (f64, f64) {
        (self.c, self.lambda)
    }

    /// `a f + b g`, with the sum of the two envelopes at the slower rate.
    pub fn combine(a: f64, f: &TailFunction, b: f64, g: &TailFunction) -> Result<TailFunction> {
        let (ff, gg) = (f.f.clone(), g.f.clone());
        let lambda = f.lambda.min(g.lambda);
        let c = (a.abs() * f.c + b.abs() * g.c).max(f64::MIN_POSITIVE);
        TailFunction::new(move |t| a * ff(t) + b * gg(t), c, lambda)
    }
}

/// `t^p e^{-lambda t}` with its Taylor expansion through `t^{p + order}` at
/// split point 1.
pub fn exp_preset(lambda: f64, power: Q, order: usize) -> Result<(TailFunction, AsymptoticExpansion)> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain("lambda must be positive"));
    }
    let p = to_f64(&power);
    let mut terms = Vec::with_capacity(order + 1);
    let mut coeff = 1.0;
    for k in 0..=order {
        if k > 0 {
            coeff *= -lambda / k as f64;
        }
        terms.push((&power + Q::from_integer(k.into()), coeff));
    }
    // t^p e^{-lambda t} <= C e^{-lambda' t} on t >= 1
    let (c, rate) = if p <= 0.0 {
        (1.0, lambda)
    } else {
        let rate = lambda / 2.0;
        let peak = (p / rate).max(1.0);
        (peak.powf(p) * (-rate * peak).exp() * (1.0 + 1e-12), rate)
    };
    let f = TailFunction::new(move |t: f64| t.powf(p) * (-lambda * t).exp(), c, rate)?;
    let e = AsymptoticExpansion::new(terms, 1.0, Q::from_integer(1.into()))?;
    Ok((f, e))
}

/// Laurent data of `M(s)` at 0 together with the finite part.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FinitePart {
    pub value: f64,
    pub c_minus1: f64,
    pub c0: f64,
    pub error_estimate: f64,
}

/// Residual `|f - expansion|` must shrink like `t^{alpha_max + rho}` towards
/// 0, and `|f| <= C e^{-lambda t}` must hold at sampled `t >= 1`.
fn spot_check(f: &TailFunction, e: &AsymptoticExpansion) -> Result<()> {
    let t0 = e.t0();
    let order = to_f64(&e.remainder_exponent());
    let residual = |t: f64| (f.eval(t) - e.eval(t)).abs();
    let floor = |t: f64| 1e-11 * (1.0 + e.partial_sum(t, |_| true).abs() + f.eval(t).abs());
    let scale = (residual(t0) / t0.powf(order)).max(1.0);
    for j in 1..=12 {
        let t = t0 * 0.5f64.powi(j);
        let r = residual(t);
        if !r.is_finite() {
            return Err(Error::numeric(format!("function is not finite at t = {t}")));
        }
        let allowed = 16.0 * scale * t.powf(order) + floor(t);
        if r > allowed {
            return Err(Error::Diagnostics(format!(
                "expansion does not match the function at t = {t:.3e}: residual {r:.3e} exceeds {allowed:.3e}"
            )));
        }
    }
    let (c, lambda) = f.decay();
    for t in [1.0, 1.5, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0] {
        let v = f.eval(t);
        let bound = c * (-lambda * t).exp();
        if !v.is_finite() || v.abs() > bound * (1.0 + 1e-9) + 1e-300 {
            return Err(Error::Diagnostics(format!(
                "decay certificate fails at t = {t}: |f| = {:.6e} > {bound:.6e}",
                v.abs()
            )));
        }
    }
    Ok(())
}

/// `∫_{t0}^∞ f(t) t^{-1} dt` through `u = e^{-lambda t}`.
fn tail_integral(f: &TailFunction, t0: f64, tol: f64) -> Result<(f64, f64)> {
    let (_, lambda) = f.decay();
    let upper = (-lambda * t0).exp();
    let integrand = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let t = -u.ln() / lambda;
        f.eval(t) / (t * lambda * u)
    };
    let q = integrate(integrand, 0.0, upper, tol, 0.0)?;
    Ok((q.value, q.error))
}

/// `FP_{s=0} M(s) / (s Γ(s)) = c_0 + γ_E c_{-1}` with the default tolerance.
pub fn fp_mellin(f: &TailFunction, e: &AsymptoticExpansion) -> Result<f64> {
    Ok(fp_mellin_with(f, e, DEFAULT_TOLERANCE)?.value)
}

pub fn fp_mellin_with(f: &TailFunction, e: &AsymptoticExpansion, tol: f64) -> Result<FinitePart> {
    if !e.remainder_exponent().is_positive() {
        return Err(Error::domain(
            "expansion must reach a positive exponent for the subtracted integrand to be integrable",
        ));
    }
    spot_check(f, e)?;
    let t0 = e.t0();
    let mut c_minus1 = 0.0;
    let mut c0 = 0.0;
    for (alpha, a) in e.terms() {
        if alpha.is_zero() {
            c_minus1 += a;
            c0 += a * t0.ln();
        } else if alpha.is_negative() {
            let x = to_f64(alpha);
            c0 += a * t0.powf(x) / x;
        }
    }

    // small-t piece: subtract the singular terms, substitute t = t0 v^q
    let q = e.denominator_lcm() as f64;
    let positive: Vec<&(Q, f64)> = e.terms().iter().filter(|(a, _)| a.is_positive()).collect();
    let switch = match positive.last() {
        Some((alpha, a)) if *a != 0.0 => {
            // below this point the truncated series is accurate to rounding
            (1e-16 / a.abs()).powf(1.0 / to_f64(alpha)).min(t0)
        }
        _ => 0.0,
    };
    let regular = |t: f64| -> f64 {
        if t < switch {
            e.partial_sum(t, |a| a.is_positive())
        } else {
            f.eval(t) - e.partial_sum(t, |a| !a.is_positive())
        }
    };
    let head = integrate(
        |v: f64| {
            if v <= 0.0 {
                return 0.0;
            }
            let t = t0 * v.powf(q);
            q * regular(t) / v
        },
        0.0,
        1.0,
        tol / 2.0,
        0.0,
    )
    .map_err(non_integrable)?;
    let (tail, tail_err) = tail_integral(f, t0, tol / 2.0).map_err(non_integrable)?;
    c0 += head.value + tail;
    Ok(FinitePart {
        value: c0 + EULER_GAMMA * c_minus1,
        c_minus1,
        c0,
        error_estimate: head.error + tail_err,
    })
}

fn non_integrable(e: Error) -> Error {
    match e {
        Error::Numeric(m) => Error::Domain(format!("non-integrable configuration: {m}")),
        other => other,
    }
}

/// `E(T) = ∫_T^∞ f(t) t^{-1} dt`, checked against the envelope
/// `C e^{-lambda T} / (lambda T)`.
pub fn truncation_tail(f: &TailFunction, big_t: f64) -> Result<TailReport> {
    if !(big_t >= 1.0 && big_t.is_finite()) {
        return Err(Error::domain("truncation point T must be at least 1"));
    }
    let (value, error) = tail_integral(f, big_t, 1e-13)?;
    let (c, lambda) = f.decay();
    let envelope = c * (-lambda * big_t).exp() / (lambda * big_t);
    if value.abs() > envelope * (1.0 + 1e-9) + error {
        return Err(Error::Diagnostics(format!(
            "tail {value:.6e} exceeds the envelope {envelope:.6e} at T = {big_t}"
        )));
    }
    Ok(TailReport {
        value,
        envelope,
        error_estimate: error,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailReport {
    pub value: f64,
    pub envelope: f64,
    pub error_estimate: f64,
}

/// `1/4 sum_{p=1}^{d} (-1)^p p FP(p-th input)`.
pub fn torsion_constant(entries: &[(TailFunction, AsymptoticExpansion)], d: usize) -> Result<f64> {
    if entries.len() != d {
        return Err(Error::domain(format!(
            "expected {d} inputs (one per form degree), got {}",
            entries.len()
        )));
    }
    let parts = entries
        .par_iter()
        .map(|(f, e)| fp_mellin(f, e))
        .collect::<Result<Vec<f64>>>()?;
    Ok(parts
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let p = (i + 1) as f64;
            let sign = if (i + 1) % 2 == 0 { 1.0 } else { -1.0 };
            sign * p * v
        })
        .sum::<f64>()
        / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_frac;

    fn exp(lambda: f64) -> (TailFunction, AsymptoticExpansion) {
        exp_preset(lambda, Q::zero(), 12).unwrap()
    }

    #[test]
    fn scaling_law() {
        for lambda in [0.5, 1.0, 2.0, std::f64::consts::E] {
            let (f, e) = exp(lambda);
            let v = fp_mellin(&f, &e).unwrap();
            assert!((v + lambda.ln()).abs() < 1e-9, "lambda={lambda}: {v}");
        }
    }

    #[test]
    fn half_power() {
        let (f, e) = exp_preset(1.0, q_frac(-1, 2), 12).unwrap();
        let v = fp_mellin(&f, &e).unwrap();
        let expect = -2.0 * std::f64::consts::PI.sqrt();
        assert!((v - expect).abs() < 1e-8, "{v}");
    }

    #[test]
    fn split_point() {
        let (f, e) = exp(2.0);
        for t0 in [0.5, 1.0, 2.0] {
            let v = fp_mellin(&f, &e.with_t0(t0).unwrap()).unwrap();
            assert!((v + 2f64.ln()).abs() < 1e-9, "t0={t0}: {v}");
        }
    }

    #[test]
    fn wrong_expansion_is_diagnosed() {
        let (f, _) = exp(1.0);
        let bad = AsymptoticExpansion::new(
            vec![(Q::zero(), 1.0), (Q::from_integer(1.into()), -0.9)],
            1.0,
            Q::from_integer(1.into()),
        )
        .unwrap();
        assert!(matches!(fp_mellin(&f, &bad), Err(Error::Diagnostics(_))));
        let fast = TailFunction::new(|t: f64| (-t).exp(), 1.0, 3.0).unwrap();
        let (_, e) = exp(1.0);
        assert!(matches!(fp_mellin(&fast, &e), Err(Error::Diagnostics(_))));
    }

    #[test]
    fn tails() {
        let (f, _) = exp(1.0);
        let r = truncation_tail(&f, 1.0).unwrap();
        assert!((r.value - 0.219_383_934_395_520_3).abs() < 1e-10);
        assert!(truncation_tail(&f, 20.0).unwrap().value < 3e-10);
        assert!(truncation_tail(&f, 0.5).is_err());
    }

    #[test]
    fn torsion() {
        let (f1, e1) = exp(1.0);
        let (f2, e2) = exp(2.0);
        let v = torsion_constant(&[(f1.clone(), e1.clone())], 1).unwrap();
        assert!(v.abs() < 1e-9);
        let v = torsion_constant(&[(f1, e1), (f2, e2)], 2).unwrap();
        assert!((v + 2f64.ln() / 2.0).abs() < 1e-9);
        let zero = TailFunction::new(|_| 0.0, 1.0, 1.0).unwrap();
        let empty = AsymptoticExpansion::new(Vec::new(), 1.0, Q::from_integer(1.into())).unwrap();
        assert_eq!(torsion_constant(&[(zero.clone(), empty.clone())], 1).unwrap(), 0.0);
        assert!(torsion_constant(&[(zero, empty)], 2).is_err());
    }
}
