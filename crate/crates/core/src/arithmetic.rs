//! Levels, prime supports and principal congruence subgroup indices.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest level accepted by [`level_data`].
pub const LEVEL_LIMIT: u64 = 1 << 63;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelData {
    pub level: u64,
    pub factorization: BTreeMap<u64, u32>,
    /// Finite primes of `S(N)`, increasing.
    pub primes: Vec<u64>,
}

impl LevelData {
    /// `|S(N)| <= 2 ln N` (vacuous for `N = 1`).
    pub fn prime_count_bound_holds(&self) -> bool {
        self.level < 2 || self.primes.len() as f64 <= 2.0 * (self.level as f64).ln()
    }
}

/// Factorization of `n >= 1` by trial division.
pub fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut take = |n: &mut u64, p: u64| {
        while (*n).is_multiple_of(p) {
            *n /= p;
            *out.entry(p).or_insert(0) += 1;
        }
    };
    take(&mut n, 2);
    take(&mut n, 3);
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        take(&mut n, p);
        take(&mut n, p + 2);
        p += 6;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

pub fn level_data(level: u64) -> Result<LevelData> {
    if level == 0 {
        return Err(Error::domain("level must be at least 1"));
    }
    if level > LEVEL_LIMIT {
        return Err(Error::resource("level exceeds 2^63"));
    }
    let factorization = factorize(level);
    let primes = factorization.keys().copied().collect();
    Ok(LevelData {
        level,
        factorization,
        primes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SlIndex {
    pub n: u32,
    pub level: u64,
    /// `|SL(n, Z/N)|`.
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
    /// `Gamma(N)` is torsion free (`N >= 3`); otherwise `value` is the raw
    /// group order.
    pub neat: bool,
}

fn ser_big<S: serde::Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

/// `|SL(n, Z/N)| = N^{n^2-1} prod_{p | N} prod_{k=2}^{n} (1 - p^{-k})`.
pub fn sl_index(n: u32, level: u64) -> Result<SlIndex> {
    if n < 2 {
        return Err(Error::domain("sl_index needs n >= 2"));
    }
    let data = level_data(level)?;
    let mut value: BigUint = Pow::pow(BigUint::from(level), n * n - 1);
    for &p in &data.primes {
        let bp = BigUint::from(p);
        let mut den = BigUint::one();
        for k in 2..=n {
            let pk: BigUint = Pow::pow(&bp, k);
            value *= &pk - 1u32;
            den *= pk;
        }
        debug_assert!((&value % &den) == BigUint::from(0u32));
        value /= den;
    }
    Ok(SlIndex {
        n,
        level,
        value,
        neat: level >= 3,
    })
}

/// `c (1 + ln N)^b`.
pub fn conjecture_bound(level: u64, b: f64, c: f64) -> Result<f64> {
    if level == 0 {
        return Err(Error::domain("level must be at least 1"));
    }
    if !(b >= 0.0) || !(c > 0.0) || !b.is_finite() || !c.is_finite() {
        return Err(Error::domain("need b >= 0 and c > 0"));
    }
    Ok(c * (1.0 + (level as f64).ln()).powf(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeFixedReport {
    pub prime_fixed: bool,
    /// Allowed primes: the declared set, or the support of the first level.
    pub reference: Vec<u64>,
    /// Union of the prime supports of all levels.
    pub union: Vec<u64>,
    /// Levels with primes outside the reference set, and those primes.
    pub offenders: Vec<(u64, Vec<u64>)>,
}

/// Whether every level has its prime divisors in one fixed finite set.
pub fn prime_fixed_check(levels: &[u64], declared: Option<&[u64]>) -> Result<PrimeFixedReport> {
    let first = *levels
        .first()
        .ok_or_else(|| Error::domain("level list is empty"))?;
    let reference: BTreeSet<u64> = match declared {
        Some(d) => d.iter().copied().collect(),
        None => level_data(first)?.primes.into_iter().collect(),
    };
    let mut union = BTreeSet::new();
    let mut offenders = Vec::new();
    for &n in levels {
        let primes = level_data(n)?.primes;
        let escaped: Vec<u64> = primes
            .iter()
            .copied()
            .filter(|p| !reference.contains(p))
            .collect();
        union.extend(primes);
        if !escaped.is_empty() {
            offenders.push((n, escaped));
        }
    }
    Ok(PrimeFixedReport {
        prime_fixed: offenders.is_empty(),
        reference: reference.into_iter().collect(),
        union: union.into_iter().collect(),
        offenders,
    })
}
