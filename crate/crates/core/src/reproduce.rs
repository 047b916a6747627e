//! End-to-end check suite behind `tracegeo reproduce`.

use std::time::Instant;

use num_bigint::BigUint;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::budget::{beta_max, beta_max_exact, e1_exact, exponents, BudgetParams};
use crate::error::Result;
use crate::exact::{q, q_frac, Q};
use crate::invariants::{k_by_pairs, k_min_orbit, k_report, k_richardson, GroupSpec, RelativeDatum};
use crate::local_data::{weyl_discriminant, RationalMatrix};
use crate::mellin::{exp_preset, fp_mellin};
use crate::oracle::{
    brute_force_parabolic_count, complement_discriminant, diagonal_discriminant, sl_order_by_rows,
};
use crate::orbits::{list_orbits, min_orbit_dim, orbit_dim, OrbitType};
use crate::parabolic::{
    all_levis, contributing_tuple_count, d_nonvanishing, enumerate_parabolic_subsets, f_sets_from,
    levi_of, tuple_bound, LeviDatum,
};
use crate::root_datum::{build_root_system, dual_coxeter_number, simple_types_up_to, Series, SimpleType};
use crate::arithmetic::sl_index;

/// Deliberate perturbations used to confirm that the suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Report `k(SL(4)) = 4`.
    KSl4,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "k-sl4" => Ok(Fault::KSl4),
            other => Err(format!("unknown fault {other:?} (known: k-sl4)")),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub id: u32,
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub passed: bool,
    pub millis: u128,
}

impl Report {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

struct Outcome {
    expected: String,
    actual: String,
    passed: bool,
}

fn outcome(expected: impl Into<String>, actual: impl Into<String>, passed: bool) -> Outcome {
    Outcome {
        expected: expected.into(),
        actual: actual.into(),
        passed,
    }
}

fn time_limited(start: Instant, limit_ms: u128, o: Outcome) -> Outcome {
    let ms = start.elapsed().as_millis();
    if ms > limit_ms {
        outcome(
            format!("{} within {limit_ms} ms", o.expected),
            format!("{} in {ms} ms", o.actual),
            false,
        )
    } else {
        o
    }
}

fn st(s: Series, l: usize) -> SimpleType {
    SimpleType::new(s, l).expect("valid type")
}

fn int(n: i64) -> Q {
    q(n)
}

/// Run every check; never panics on a failing check.
pub fn run(fault: Option<Fault>) -> Report {
    type CheckFn = fn(Option<Fault>) -> Result<Outcome>;
    let suite: [(u32, &str, CheckFn); 11] = [
        (1, "k(SL(n)) = n-1 for n = 2..8 by pairs, Richardson and minimal orbit", c1),
        (2, "k = n-2 for D_{(n+1)/2}, n = 5,7,9; relative SO(3,1) gives 2", c2),
        (3, "k(A1 with restriction degree n) = n for n = 1..5", c3),
        (4, "pair enumeration equals h^v - 1 for every simple type of rank <= 8", c4),
        (5, "F(M) is the disjoint union of the P(L), L in L(M)", c5),
        (6, "nilpotent orbit dimension minima", c6),
        (7, "Weyl discriminant: three routes agree on 100 diagonal matrices", c7),
        (8, "SL(n, Z/N) orders and coprime multiplicativity", c8),
        (9, "Mellin finite parts", c9),
        (10, "error-exponent budget", c10),
        (11, "tuple bound and d-predicate symmetry", c11),
    ];
    let total = Instant::now();
    let checks: Vec<Check> = suite
        .iter()
        .map(|&(id, name, f)| {
            let start = Instant::now();
            let o = f(fault).unwrap_or_else(|e| outcome("no error", e.to_string(), false));
            Check {
                id,
                name: name.to_string(),
                expected: o.expected,
                actual: o.actual,
                passed: o.passed,
                millis: start.elapsed().as_millis(),
            }
        })
        .collect();
    Report {
        passed: checks.iter().all(|c| c.passed),
        checks,
        millis: total.elapsed().as_millis(),
    }
}

fn c1(fault: Option<Fault>) -> Result<Outcome> {
    let start = Instant::now();
    let mut expected = Vec::new();
    let mut actual = Vec::new();
    for n in 2..=8usize {
        let g = GroupSpec::new(vec![st(Series::A, n - 1)], 0);
        let mut pairs = k_by_pairs(&g)?;
        if fault == Some(Fault::KSl4) && n == 4 {
            pairs = int(4);
        }
        let rich = k_richardson(&g)?;
        let min = k_min_orbit(&g)?;
        expected.push(format!("{}", n - 1));
        actual.push(if pairs == rich && rich == min {
            format!("{pairs}")
        } else {
            format!("{pairs}/{rich}/{min}")
        });
    }
    let passed = expected == actual;
    Ok(time_limited(
        start,
        1000,
        outcome(expected.join(","), actual.join(","), passed),
    ))
}

fn c2(_: Option<Fault>) -> Result<Outcome> {
    let mut actual = Vec::new();
    for n in [5usize, 7, 9] {
        let g = GroupSpec::new(vec![st(Series::D, n.div_ceil(2))], 0);
        actual.push(format!("{}", k_by_pairs(&g)?));
    }
    let rel = RelativeDatum::new(vec!["alpha".into()], vec![2], None)?;
    let g = GroupSpec::new(vec![st(Series::D, 2)], 0).with_relative(rel)?;
    actual.push(format!("{}", k_report(&g)?.k));
    let expected = "3,5,7,2";
    let actual = actual.join(",");
    Ok(outcome(expected, actual.clone(), actual == expected))
}

fn c3(_: Option<Fault>) -> Result<Outcome> {
    let mut actual = Vec::new();
    for n in 1..=5u32 {
        let g = GroupSpec::new(vec![st(Series::A, 1)], 0).with_degree(n)?;
        let (a, b, c) = (k_by_pairs(&g)?, k_richardson(&g)?, k_min_orbit(&g)?);
        actual.push(if a == b && b == c {
            format!("{a}")
        } else {
            format!("{a}/{b}/{c}")
        });
    }
    let actual = actual.join(",");
    Ok(outcome("1,2,3,4,5", actual.clone(), actual == "1,2,3,4,5"))
}

fn c4(_: Option<Fault>) -> Result<Outcome> {
    let start = Instant::now();
    let mut bad = Vec::new();
    let types = simple_types_up_to(8);
    for &t in &types {
        let g = GroupSpec::new(vec![t], 0);
        let k = k_by_pairs(&g)?;
        if k != int(dual_coxeter_number(t) as i64 - 1) {
            bad.push(format!("{t}: {k}"));
        }
    }
    Ok(time_limited(
        start,
        10_000,
        outcome(
            format!("{} types agree", types.len()),
            if bad.is_empty() {
                format!("{} types agree", types.len())
            } else {
                bad.join("; ")
            },
            bad.is_empty(),
        ),
    ))
}

fn c5(_: Option<Fault>) -> Result<Outcome> {
    let systems: [&[SimpleType]; 5] = [
        &[st(Series::A, 1)],
        &[st(Series::A, 1), st(Series::A, 1)],
        &[st(Series::A, 2)],
        &[st(Series::A, 3)],
        &[st(Series::B, 2)],
    ];
    let mut problems = Vec::new();
    let mut levis_checked = 0;
    let mut a2_count = (0, None);
    for factors in systems {
        let rs = build_root_system(factors, 0)?;
        let all = enumerate_parabolic_subsets(&rs)?;
        let brute = brute_force_parabolic_count(&rs);
        if brute != Some(all.len() as u64) {
            problems.push(format!("{factors:?}: {} vs brute force {brute:?}", all.len()));
        }
        if factors == [st(Series::A, 2)] {
            let m0 = LeviDatum::minimal(&rs);
            a2_count = (f_sets_from(&rs, &m0, &all)?.parabolics.len(), brute);
        }
        for m in all_levis(&rs)? {
            levis_checked += 1;
            let f = f_sets_from(&rs, &m, &all)?;
            let mut covered = 0;
            for (l, group) in &f.by_levi {
                for p in group {
                    if levi_of(&rs, p) != *l {
                        problems.push("parabolic filed under the wrong Levi".into());
                    }
                }
                covered += group.len();
            }
            let distinct: std::collections::HashSet<_> =
                f.by_levi.iter().flat_map(|(_, g)| g.iter()).collect();
            if covered != f.parabolics.len() || distinct.len() != covered {
                problems.push(format!("{factors:?}: groups do not partition F(M)"));
            }
        }
    }
    let ok = problems.is_empty() && a2_count == (13, Some(13));
    Ok(outcome(
        "partition holds; |F(M0)| for A2 = 13 = brute force",
        if problems.is_empty() {
            format!(
                "partition holds for {levis_checked} Levis; |F(M0)| for A2 = {} (brute force {:?})",
                a2_count.0, a2_count.1
            )
        } else {
            problems.join("; ")
        },
        ok,
    ))
}

fn c6(_: Option<Fault>) -> Result<Outcome> {
    let mut bad = Vec::new();
    for n in 2..=8usize {
        let dims: Vec<usize> = list_orbits(OrbitType::Gl(n))?.iter().map(orbit_dim).collect();
        let min = dims.iter().copied().filter(|&d| d > 0).min();
        let max = dims.iter().copied().max();
        if min != Some(2 * n - 2) || max != Some(n * n - n) {
            bad.push(format!("gl{n}: min {min:?} max {max:?}"));
        }
    }
    let mut count = 0;
    for t in simple_types_up_to(8) {
        if !matches!(t.series(), Series::B | Series::C | Series::D) {
            continue;
        }
        count += 1;
        let min = list_orbits(OrbitType::Simple(t))?
            .iter()
            .map(orbit_dim)
            .filter(|&d| d > 0)
            .min();
        if min != Some(min_orbit_dim(t)) || min_orbit_dim(t) != 2 * (dual_coxeter_number(t) as usize - 1) {
            bad.push(format!("{t}: {min:?}"));
        }
    }
    Ok(outcome(
        format!("gl2..gl8 and {count} B/C/D types match"),
        if bad.is_empty() {
            format!("gl2..gl8 and {count} B/C/D types match")
        } else {
            bad.join("; ")
        },
        bad.is_empty(),
    ))
}

fn c7(_: Option<Fault>) -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = Vec::new();
    for trial in 0..100 {
        let n = rng.gen_range(2..=4);
        let diag: Vec<Q> = (0..n)
            .map(|_| {
                let mut num = rng.gen_range(-6i64..=6);
                if num == 0 {
                    num = 1;
                }
                q_frac(num, rng.gen_range(1..=4))
            })
            .collect();
        let g = RationalMatrix::diagonal(&diag);
        let poly = weyl_discriminant(&g)?.value;
        let direct = diagonal_discriminant(&diag);
        let complement = complement_discriminant(&g);
        if poly != direct || complement.as_ref() != Some(&direct) {
            bad.push(format!("trial {trial}: {poly} / {direct} / {complement:?}"));
        }
    }
    let id = weyl_discriminant(&RationalMatrix::identity(3))?.value;
    if id != int(1) {
        bad.push(format!("identity gives {id}"));
    }
    Ok(outcome(
        "100 agreements, identity 1",
        if bad.is_empty() {
            "100 agreements, identity 1".to_string()
        } else {
            bad.join("; ")
        },
        bad.is_empty(),
    ))
}

fn c8(_: Option<Fault>) -> Result<Outcome> {
    let mut bad = Vec::new();
    for n in 2..=3u32 {
        for level in 2..=8u64 {
            let formula = sl_index(n, level)?.value;
            let brute = BigUint::from(sl_order_by_rows(n as usize, level));
            if formula != brute {
                bad.push(format!("n={n} N={level}: {formula} vs {brute}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut pairs = 0;
    while pairs < 20 {
        let (a, b) = (rng.gen_range(1..=500u64), rng.gen_range(1..=500u64));
        if a.gcd(&b) != 1 {
            continue;
        }
        pairs += 1;
        let n = rng.gen_range(2..=4u32);
        let lhs = sl_index(n, a * b)?.value;
        let rhs = sl_index(n, a)?.value * sl_index(n, b)?.value;
        if lhs != rhs {
            bad.push(format!("n={n} {a}*{b}"));
        }
    }
    Ok(outcome(
        "14 brute-force matches, 20 multiplicative pairs",
        if bad.is_empty() {
            "14 brute-force matches, 20 multiplicative pairs".to_string()
        } else {
            bad.join("; ")
        },
        bad.is_empty(),
    ))
}

fn c9(_: Option<Fault>) -> Result<Outcome> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for lambda in [0.5, 1.0, 2.0, std::f64::consts::E] {
        let (f, e) = exp_preset(lambda, Q::from_integer(0.into()), 12)?;
        let err = (fp_mellin(&f, &e)? + lambda.ln()).abs();
        worst = worst.max(err / 1e-8);
        notes.push(format!("lambda={lambda:.4}: {err:.1e}"));
    }
    let (f, e) = exp_preset(1.0, q_frac(-1, 2), 12)?;
    let err = (fp_mellin(&f, &e)? + 2.0 * std::f64::consts::PI.sqrt()).abs();
    worst = worst.max(err / 1e-7);
    notes.push(format!("t^-1/2 e^-t: {err:.1e}"));
    for power in [Q::from_integer(0.into()), q_frac(-1, 2)] {
        let (f, e) = exp_preset(1.5, power, 12)?;
        let base = fp_mellin(&f, &e)?;
        for t0 in [0.5, 2.0] {
            let err = (fp_mellin(&f, &e.with_t0(t0)?)? - base).abs();
            worst = worst.max(err / 1e-7);
            notes.push(format!("t0={t0}: {err:.1e}"));
        }
    }
    Ok(time_limited(
        start,
        5000,
        outcome("all errors within tolerance", notes.join(", "), worst <= 1.0),
    ))
}

fn c10(_: Option<Fault>) -> Result<Outcome> {
    let mut bad = Vec::new();
    let rationals = [
        (q(1), q(1), q(1), q(1)),
        (q(2), q(1), q(1), q(1)),
        (q_frac(3, 7), q(5), q_frac(2, 3), q_frac(9, 4)),
        (q_frac(1, 10), q_frac(7, 3), q(4), q(0)),
    ];
    for (c2, c4, cn, k) in &rationals {
        let beta = beta_max_exact(c2, c4, cn, k)?;
        let e1 = e1_exact(c2, c4, cn, &beta)?;
        if !(e1.is_rational() && e1.a == -k.clone()) {
            bad.push(format!("e1 = {e1} for k = {k}"));
        }
    }
    let golden = (5f64.sqrt() - 1.0) / 2.0;
    let b = beta_max(1.0, 1.0, 1.0, 1.0)?;
    if (b - golden).abs() > 1e-12 {
        bad.push(format!("beta* = {b}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let p = BudgetParams::feasible(
            rng.gen_range(0.01..10.0),
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.1..10.0),
            rng.gen_range(0.001..0.5),
            rng.gen_range(0.0..5.0),
        )?;
        if !exponents(&p)?.all_ok {
            bad.push(format!("{p:?}"));
        }
    }
    Ok(outcome(
        "e1 = -k exactly; beta* golden; 100 feasible draws",
        if bad.is_empty() {
            "e1 = -k exactly; beta* golden; 100 feasible draws".to_string()
        } else {
            bad.join("; ")
        },
        bad.is_empty(),
    ))
}

fn c11(_: Option<Fault>) -> Result<Outcome> {
    let mut bad = Vec::new();
    let mut counts = Vec::new();
    for factors in [[st(Series::A, 2)], [st(Series::A, 3)]] {
        let rs = build_root_system(&factors, 0)?;
        let all = enumerate_parabolic_subsets(&rs)?;
        let m0 = LeviDatum::minimal(&rs);
        let levis = f_sets_from(&rs, &m0, &all)?.levis;
        let d = m0.a_m_g_dim(&rs);
        let m_index = levis
            .iter()
            .position(|l| *l == m0)
            .expect("M0 is in L(M0)");
        for s in 1..=4usize {
            let brute = count_by_enumeration(levis.len(), m_index, s, d);
            let closed = contributing_tuple_count(s, d, levis.len() as u128)?;
            let bound = tuple_bound(s, d, levis.len() as u128);
            counts.push(format!("{}:{s}:{brute}", factors[0]));
            if closed != brute || bound.is_none_or(|b| brute > b) {
                bad.push(format!("{} s={s}: {brute} vs {closed}, bound {bound:?}", factors[0]));
            }
        }
        let every = all_levis(&rs)?;
        let g = LeviDatum::whole(&rs);
        for m in &every {
            if !d_nonvanishing(&rs, m, m, &g)? {
                bad.push(format!("{}: d(m,m,G) false", factors[0]));
            }
            let above: Vec<&LeviDatum> = every.iter().filter(|l| l.contains(m)).collect();
            for (i, l1) in above.iter().enumerate() {
                for l2 in &above[i..] {
                    if d_nonvanishing(&rs, m, l1, l2)? != d_nonvanishing(&rs, m, l2, l1)? {
                        bad.push(format!("{}: asymmetric d", factors[0]));
                    }
                }
            }
        }
    }
    Ok(outcome(
        "counts within bound; d symmetric; d(m,m,G) true",
        if bad.is_empty() {
            counts.join(" ")
        } else {
            bad.join("; ")
        },
        bad.is_empty(),
    ))
}

/// Tuples in `{0..num}^s` with at most `d` entries different from `m_index`.
fn count_by_enumeration(num: usize, m_index: usize, s: usize, d: usize) -> u128 {
    let mut idx = vec![0usize; s];
    let mut count = 0u128;
    loop {
        if idx.iter().filter(|&&x| x != m_index).count() <= d {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == s {
                return count;
            }
            idx[k] += 1;
            if idx[k] < num {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_is_detected() {
        let o = c1(Some(Fault::KSl4)).unwrap();
        assert!(!o.passed);
        assert!(c1(None).unwrap().passed);
    }

    #[test]
    fn enumeration_helper() {
        assert_eq!(count_by_enumeration(5, 0, 2, 2), 25);
        assert_eq!(count_by_enumeration(5, 0, 3, 1), 1 + 3 * 4);
    }
}
