//! JSON input for `mellin-fp --spec`.
//!
//! ```json
//! {
//!   "terms": [["-1/2", 1.0], ["1/2", -2.0]],
//!   "t0": 1.0,
//!   "remainder_order": "1",
//!   "decay": {"C": 1.0, "lambda": 2.0},
//!   "preset": {"name": "exp", "lambda": 2.0, "power": "-1/2", "order": 12}
//! }
//! ```
//!
//! Instead of `preset`, `samples: [[t, f(t)], ...]` gives the function on a
//! grid. Between samples it is cubic Hermite; below the first sample it is the
//! expansion plus the residual there scaled by `t^{alpha_max + rho}`; beyond
//! the last it decays at the declared rate.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Q};
use crate::mellin::{exp_preset, AsymptoticExpansion, TailFunction};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFile {
    terms: Option<Vec<(Value, f64)>>,
    t0: Option<f64>,
    remainder_order: Option<Value>,
    decay: Option<Decay>,
    preset: Option<Preset>,
    samples: Option<Vec<(f64, f64)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Decay {
    #[serde(rename = "C")]
    c: f64,
    lambda: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Preset {
    name: String,
    lambda: f64,
    #[serde(default)]
    power: Option<Value>,
    #[serde(default)]
    order: Option<usize>,
}

fn rational(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => parse_rational(&n.to_string()),
        other => Err(Error::Parse {
            offset: 0,
            message: format!("{other} is not an integer or \"num/den\" string"),
        }),
    }
}

pub fn load(path: &Path) -> Result<(TailFunction, AsymptoticExpansion)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<(TailFunction, AsymptoticExpansion)> {
    let spec: SpecFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let explicit_terms = match &spec.terms {
        Some(ts) => Some(
            ts.iter()
                .map(|(a, c)| Ok((rational(a)?, *c)))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let remainder = spec.remainder_order.as_ref().map(rational).transpose()?;

    match (spec.preset, spec.samples) {
        (Some(_), Some(_)) => Err(Error::Domain("give either preset or samples, not both".into())),
        (None, None) => Err(Error::Domain("one of preset or samples is required".into())),
        (Some(p), None) => {
            if p.name != "exp" {
                return Err(Error::Domain(format!("unknown preset {:?} (known: exp)", p.name)));
            }
            let power = p.power.as_ref().map(rational).transpose()?.unwrap_or_default();
            let (mut f, mut e) = exp_preset(p.lambda, power, p.order.unwrap_or(12))?;
            if let Some(d) = spec.decay {
                let g = f.clone();
                f = TailFunction::new(move |t| g.eval(t), d.c, d.lambda)?;
            }
            if explicit_terms.is_some() || remainder.is_some() {
                e = AsymptoticExpansion::new(
                    explicit_terms.unwrap_or_else(|| e.terms().to_vec()),
                    e.t0(),
                    remainder.unwrap_or_else(|| e.remainder_order().clone()),
                )?;
            }
            if let Some(t0) = spec.t0 {
                e = e.with_t0(t0)?;
            }
            Ok((f, e))
        }
        (None, Some(samples)) => {
            let terms = explicit_terms
                .ok_or_else(|| Error::Domain("samples need explicit expansion terms".into()))?;
            let decay = spec
                .decay
                .ok_or_else(|| Error::Domain("samples need a decay certificate".into()))?;
            let e = AsymptoticExpansion::new(
                terms,
                spec.t0.unwrap_or(1.0),
                remainder.unwrap_or_else(|| Q::from_integer(1.into())),
            )?;
            let interp = Interpolant::new(samples, decay.lambda)?;
            let below = e.clone();
            let (t1, y1) = (interp.t[0], interp.y[0]);
            let r1 = y1 - below.eval(t1);
            let order = num_traits::ToPrimitive::to_f64(&below.remainder_exponent()).unwrap_or(1.0);
            let f = TailFunction::new(
                move |t| {
                    if t < t1 {
                        below.eval(t) + r1 * (t / t1).powf(order)
                    } else {
                        interp.eval(t)
                    }
                },
                decay.c,
                decay.lambda,
            )?;
            Ok((f, e))
        }
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    start + column.saturating_sub(1)
}

struct Interpolant {
    t: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
    lambda: f64,
}

impl Interpolant {
    fn new(mut samples: Vec<(f64, f64)>, lambda: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Domain("at least two samples are required".into()));
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        if samples.iter().any(|&(t, y)| !(t > 0.0 && t.is_finite() && y.is_finite())) {
            return Err(Error::Domain("samples must have finite values at positive t".into()));
        }
        if samples.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("sample abscissae must be distinct".into()));
        }
        let (t, y): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
        let n = t.len();
        let secant = |i: usize| (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
        // three-point one-sided derivative at the ends
        let end = |a: usize, b: usize, c: usize| {
            let (h0, h1) = (t[b] - t[a], t[c] - t[b]);
            -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * y[a] + (h0 + h1) / (h0 * h1) * y[b]
                - h0 / (h1 * (h0 + h1)) * y[c]
        };
        let slope = (0..n)
            .map(|i| match i {
                0 if n > 2 => end(0, 1, 2),
                i if i == n - 1 && n > 2 => {
                    let (h0, h1) = (t[n - 2] - t[n - 3], t[n - 1] - t[n - 2]);
                    h1 / (h0 * (h0 + h1)) * y[n - 3] - (h0 + h1) / (h0 * h1) * y[n - 2]
                        + (2.0 * h1 + h0) / (h1 * (h0 + h1)) * y[n - 1]
                }
                0 => secant(0),
                i if i == n - 1 => secant(n - 2),
                i => {
                    let (h0, h1) = (t[i] - t[i - 1], t[i + 1] - t[i]);
                    (h1 * secant(i - 1) + h0 * secant(i)) / (h0 + h1)
                }
            })
            .collect();
        Ok(Interpolant { t, y, slope, lambda })
    }

    fn eval(&self, x: f64) -> f64 {
        let n = self.t.len();
        if x >= self.t[n - 1] {
            return self.y[n - 1] * (-self.lambda * (x - self.t[n - 1])).exp();
        }
        let i = self.t.partition_point(|&s| s <= x).saturating_sub(1).min(n - 2);
        let h = self.t[i + 1] - self.t[i];
        let s = (x - self.t[i]) / h;
        let (s2, s3) = (s * s, s * s * s);
        (2.0 * s3 - 3.0 * s2 + 1.0) * self.y[i]
            + (s3 - 2.0 * s2 + s) * h * self.slope[i]
            + (-2.0 * s3 + 3.0 * s2) * self.y[i + 1]
            + (s3 - s2) * h * self.slope[i + 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mellin::fp_mellin;

    #[test]
    fn preset_file_matches_closed_form() {
        let (f, e) = parse(r#"{"preset": {"name": "exp", "lambda": 2.0}, "t0": 0.5}"#).unwrap();
        assert!((fp_mellin(&f, &e).unwrap() + 2f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn samples_reproduce_exponential() {
        let samples: Vec<(f64, f64)> = (1..=4000)
            .map(|i| {
                let t = 0.01 * i as f64;
                (t, (-t).exp())
            })
            .collect();
        let terms = vec![(Value::from(0), 1.0), (Value::from(1), -1.0)];
        let doc = serde_json::json!({
            "terms": terms,
            "t0": 1.0,
            "remainder_order": "1",
            "decay": {"C": 1.0, "lambda": 1.0},
            "samples": samples,
        });
        let (f, e) = parse(&doc.to_string()).unwrap();
        let v = fp_mellin(&f, &e).unwrap();
        assert!(v.abs() < 1e-6, "{v}");
    }

    #[test]
    fn bad_json_reports_offset() {
        match parse("{\n  \"t0\": 1.0,\n  oops\n}") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 17),
            other => panic!("{other:?}"),
        }
    }
}
