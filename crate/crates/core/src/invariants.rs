//! The decay invariant `k(G)`: half the smallest dimension of a nontrivial
//! induced unipotent orbit.

use std::path::PathBuf;

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Q;
use crate::orbits::{factor_labels, induced_dim, min_orbit_dim, orbit_dim};
use crate::root_datum::{build_root_system, RootSystem, SimpleType};

/// Rank limit for the pair enumeration (all subsets of simple roots are visited).
pub const PAIRS_RANK_LIMIT: usize = 8;

/// Rational root datum with the dimension of each root space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelativeDatum {
    simple_roots: Vec<String>,
    /// Positive relative roots in relative simple-root coordinates.
    positive_roots: Vec<Vec<u32>>,
    /// `dim` of the root space of each positive root.
    root_dims: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RelativeDatumJson {
    simple_roots: Vec<serde_json::Value>,
    nilradical_dims: Vec<u64>,
    #[serde(default)]
    positive_roots: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    positive_root_dims: Option<Vec<u64>>,
}

impl RelativeDatum {
    /// `simple_dims[i]` is the root-space dimension of simple root `i`. When
    /// the relative rank exceeds one the remaining positive roots must be
    /// listed together with their dimensions.
    pub fn new(
        simple_roots: Vec<String>,
        simple_dims: Vec<u64>,
        extra: Option<(Vec<Vec<u32>>, Vec<u64>)>,
    ) -> Result<Self> {
        let r = simple_roots.len();
        if r == 0 {
            return Err(Error::domain("relative datum has no simple roots"));
        }
        if simple_dims.len() != r {
            return Err(Error::domain(format!(
                "{} simple roots but {} nilradical dimensions",
                r,
                simple_dims.len()
            )));
        }
        if simple_dims.contains(&0) {
            return Err(Error::domain("nilradical dimensions must be positive"));
        }
        let unit = |i: usize| -> Vec<u32> { (0..r).map(|j| u32::from(i == j)).collect() };
        let mut positive_roots: Vec<Vec<u32>> = (0..r).map(unit).collect();
        let mut root_dims = simple_dims.clone();
        match extra {
            None if r > 1 => {
                return Err(Error::domain(
                    "relative rank above one needs positive_roots and positive_root_dims",
                ))
            }
            None => {}
            Some((roots, dims)) => {
                if roots.len() != dims.len() {
                    return Err(Error::domain(
                        "positive_roots and positive_root_dims differ in length",
                    ));
                }
                for (root, dim) in roots.into_iter().zip(dims) {
                    if root.len() != r || root.iter().all(|&c| c == 0) {
                        return Err(Error::domain(format!(
                            "positive root {root:?} is not a nonzero vector of length {r}"
                        )));
                    }
                    if dim == 0 {
                        return Err(Error::domain("root-space dimensions must be positive"));
                    }
                    if let Some(pos) = positive_roots.iter().position(|x| *x == root) {
                        if pos < r && root_dims[pos] == dim {
                            continue;
                        }
                        return Err(Error::domain(format!(
                            "positive root {root:?} listed twice or with a conflicting dimension"
                        )));
                    }
                    positive_roots.push(root);
                    root_dims.push(dim);
                }
            }
        }
        Ok(RelativeDatum {
            simple_roots,
            positive_roots,
            root_dims,
        })
    }

    /// Reads `{simple_roots, nilradical_dims[, positive_roots, positive_root_dims]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RelativeDatumJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            offset: byte_offset(text, e.line(), e.column()),
            message: e.to_string(),
        })?;
        let names = raw
            .simple_roots
            .iter()
            .map(|v| match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        let extra = match (raw.positive_roots, raw.positive_root_dims) {
            (None, None) => None,
            (Some(r), Some(d)) => Some((r, d)),
            _ => {
                return Err(Error::domain(
                    "positive_roots and positive_root_dims must be given together",
                ))
            }
        };
        RelativeDatum::new(names, raw.nilradical_dims, extra)
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    pub fn simple_roots(&self) -> &[String] {
        &self.simple_roots
    }

    /// Dimension of the unipotent radical of the standard parabolic attached
    /// to the relative simple roots in `subset`.
    pub fn dim_unipotent_radical(&self, subset: &[usize]) -> u64 {
        self.positive_roots
            .iter()
            .zip(&self.root_dims)
            .filter(|(root, _)| {
                root.iter()
                    .enumerate()
                    .any(|(j, &c)| c != 0 && !subset.contains(&j))
            })
            .map(|(_, &d)| d)
            .sum()
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let start: usize = text
        .split_inclusive('\n')
        .take(line - 1)
        .map(str::len)
        .sum();
    (start + column.saturating_sub(1)).min(text.len())
}

/// A reductive group: absolute simple factors, central torus, degree of a
/// restriction of scalars and an optional rational datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub factors: Vec<SimpleType>,
    pub torus_rank: usize,
    pub restriction_degree: u32,
    pub relative: Option<RelativeDatum>,
    /// File the relative datum is (or will be) read from.
    pub relative_path: Option<PathBuf>,
}

impl GroupSpec {
    pub fn new(factors: Vec<SimpleType>, torus_rank: usize) -> Self {
        GroupSpec {
            factors,
            torus_rank,
            restriction_degree: 1,
            relative: None,
            relative_path: None,
        }
    }

    pub fn with_degree(mut self, degree: u32) -> Result<Self> {
        if degree == 0 {
            return Err(Error::domain("restriction degree must be at least 1"));
        }
        self.restriction_degree = degree;
        Ok(self)
    }

    pub fn with_relative(mut self, relative: RelativeDatum) -> Result<Self> {
        let abs_rank: usize = self.factors.iter().map(|t| t.rank()).sum();
        if relative.rank() > abs_rank {
            return Err(Error::domain(format!(
                "relative rank {} exceeds absolute rank {abs_rank}",
                relative.rank()
            )));
        }
        self.relative = Some(relative);
        Ok(self)
    }

    /// Loads the relative datum from `relative_path` if it has not been loaded.
    pub fn resolve_relative(&mut self) -> Result<()> {
        if self.relative.is_some() {
            return Ok(());
        }
        if let Some(path) = &self.relative_path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let datum = RelativeDatum::from_json(&text)?;
            let me = std::mem::replace(self, GroupSpec::new(Vec::new(), 0));
            *self = me.with_relative(datum)?;
        }
        Ok(())
    }

    pub fn root_system(&self) -> Result<RootSystem> {
        build_root_system(&self.factors, self.torus_rank)
    }

    pub fn semisimple_rank(&self) -> usize {
        self.factors.iter().map(|t| t.rank()).sum()
    }
}

fn half(twice: u64) -> Q {
    Q::new(twice.into(), 2.into())
}

fn no_unipotents() -> Error {
    Error::domain("no nontrivial unipotent orbits: the group has no simple factor")
}

/// Smallest induced-orbit dimension over one standard Levi, excluding the
/// trivial orbit of `G` itself.
fn min_over_levi(rs: &RootSystem, subset: &[usize]) -> Option<usize> {
    let whole = subset.len() == rs.rank();
    let dim_v = rs.num_positive() - rs.positive_roots_in_span(subset).len();
    let factor_dims: Vec<Vec<usize>> = rs
        .classify_simple_subset(subset)
        .into_iter()
        .map(|t| factor_labels(t, whole).iter().map(orbit_dim).collect())
        .collect();
    let mut best: Option<usize> = None;
    let mut idx = vec![0usize; factor_dims.len()];
    loop {
        let dim: usize = idx.iter().zip(&factor_dims).map(|(&i, d)| d[i]).sum();
        if !(whole && dim == 0) {
            let ind = induced_dim(dim, dim_v);
            best = Some(best.map_or(ind, |b| b.min(ind)));
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return best;
            }
            idx[k] += 1;
            if idx[k] < factor_dims[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// `k(G)` as half the minimum of `dim Ind_M^G O` over standard Levis `M` and
/// orbit labels `O` of `M`, excluding `(G, 1)`, times the restriction degree.
pub fn k_by_pairs(g: &GroupSpec) -> Result<Q> {
    let rank = g.semisimple_rank();
    if rank == 0 {
        return Err(no_unipotents());
    }
    if rank > PAIRS_RANK_LIMIT {
        return Err(Error::resource(format!(
            "pair enumeration is limited to semisimple rank {PAIRS_RANK_LIMIT}"
        )));
    }
    let rs = g.root_system()?;
    let best = (0u32..(1u32 << rank))
        .into_par_iter()
        .filter_map(|mask| {
            let subset: Vec<usize> = (0..rank).filter(|&i| mask >> i & 1 == 1).collect();
            min_over_levi(&rs, &subset)
        })
        .min()
        .ok_or_else(no_unipotents)?;
    Ok(half(best as u64 * u64::from(g.restriction_degree)))
}

/// `k(G) = min_{P != G} dim V_P`, over the relative datum when present and
/// over the absolute datum (scaled by the restriction degree) otherwise.
pub fn k_richardson(g: &GroupSpec) -> Result<Q> {
    if let Some(rel) = &g.relative {
        let r = rel.rank();
        let best = (0..r)
            .map(|drop| {
                let subset: Vec<usize> = (0..r).filter(|&j| j != drop).collect();
                rel.dim_unipotent_radical(&subset)
            })
            .min()
            .expect("relative rank is positive");
        return Ok(Q::from_integer(best.into()));
    }
    let rank = g.semisimple_rank();
    if rank == 0 {
        return Err(no_unipotents());
    }
    let rs = g.root_system()?;
    let best = (0..rank)
        .map(|drop| {
            let subset: Vec<usize> = (0..rank).filter(|&j| j != drop).collect();
            rs.num_positive() - rs.positive_roots_in_span(&subset).len()
        })
        .min()
        .expect("rank is positive");
    Ok(Q::from_integer(
        (best as u64 * u64::from(g.restriction_degree)).into(),
    ))
}

/// `k(G)` from the minimal nilpotent orbit: degree times the minimum of
/// `h^v - 1` over simple factors.
pub fn k_min_orbit(g: &GroupSpec) -> Result<Q> {
    let best = g
        .factors
        .iter()
        .map(|&t| min_orbit_dim(t))
        .min()
        .ok_or_else(no_unipotents)?;
    Ok(half(best as u64 * u64::from(g.restriction_degree)))
}

/// Richardson value, required to agree with the pair enumeration.
pub fn k_richardson_asserted(g: &GroupSpec) -> Result<Q> {
    let rich = k_richardson(g)?;
    let pairs = k_by_pairs(g)?;
    if rich != pairs {
        return Err(Error::Diagnostics(format!(
            "Richardson value {rich} differs from the pair enumeration {pairs}"
        )));
    }
    Ok(rich)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KMethod {
    Pairs,
    Richardson,
    Minorbit,
}

/// Every available value of `k(G)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KReport {
    pub pairs: Option<Q>,
    pub richardson: Q,
    pub min_orbit: Q,
    /// Richardson value on the rational datum, when one was supplied.
    pub relative: Option<Q>,
    /// The geometric and rational values differ.
    pub disagreement: bool,
    /// Value reported as `k(G)`: the rational one when present, else the
    /// geometric minimum.
    pub k: Q,
}

pub fn k_report(g: &GroupSpec) -> Result<KReport> {
    let min_orbit = k_min_orbit(g)?;
    let pairs = if g.semisimple_rank() <= PAIRS_RANK_LIMIT {
        Some(k_by_pairs(g)?)
    } else {
        None
    };
    let mut absolute = g.clone();
    absolute.relative = None;
    let richardson = k_richardson(&absolute)?;
    let relative = match &g.relative {
        Some(_) => Some(k_richardson(g)?),
        None => None,
    };
    let geometric = pairs.clone().unwrap_or_else(|| min_orbit.clone());
    let disagreement = relative.as_ref().is_some_and(|r| *r != geometric);
    let k = relative.clone().unwrap_or(geometric);
    Ok(KReport {
        pairs,
        richardson,
        min_orbit,
        relative,
        disagreement,
        k,
    })
}

pub fn k_as_f64(k: &Q) -> f64 {
    k.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::Series;

    fn spec(factors: &[(Series, usize)]) -> GroupSpec {
        GroupSpec::new(
            factors
                .iter()
                .map(|&(s, l)| SimpleType::new(s, l).unwrap())
                .collect(),
            0,
        )
    }

    fn int(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn sl_n() {
        for n in 2..=8usize {
            let g = spec(&[(Series::A, n - 1)]);
            let expect = int(n as i64 - 1);
            assert_eq!(k_by_pairs(&g).unwrap(), expect);
            assert_eq!(k_richardson(&g).unwrap(), expect);
            assert_eq!(k_min_orbit(&g).unwrap(), expect);
        }
    }

    #[test]
    fn examples() {
        assert_eq!(k_min_orbit(&spec(&[(Series::A, 1)])).unwrap(), int(1));
        assert_eq!(k_min_orbit(&spec(&[(Series::D, 4)])).unwrap(), int(5));
        assert_eq!(k_richardson(&spec(&[(Series::A, 2)])).unwrap(), int(2));
        let res3 = spec(&[(Series::A, 1)]).with_degree(3).unwrap();
        assert_eq!(k_min_orbit(&res3).unwrap(), int(3));
        assert_eq!(k_by_pairs(&res3).unwrap(), int(3));
    }

    #[test]
    fn so_3_1() {
        let rel = RelativeDatum::from_json(r#"{"simple_roots":["a"],"nilradical_dims":[2]}"#).unwrap();
        let g = spec(&[(Series::D, 2)]).with_relative(rel).unwrap();
        let report = k_report(&g).unwrap();
        assert_eq!(report.relative, Some(int(2)));
        assert_eq!(report.pairs, Some(int(1)));
        assert!(report.disagreement);
        assert_eq!(report.k, int(2));
    }

    #[test]
    fn richardson_over_all_subsets() {
        let g = spec(&[(Series::B, 3), (Series::A, 2)]);
        let rs = g.root_system().unwrap();
        let all = (0u32..(1 << 5) - 1)
            .map(|mask| {
                let s: Vec<usize> = (0..5).filter(|&i| mask >> i & 1 == 1).collect();
                rs.num_positive() - rs.positive_roots_in_span(&s).len()
            })
            .min()
            .unwrap();
        assert_eq!(k_richardson(&g).unwrap(), int(all as i64));
    }

    #[test]
    fn torus_is_refused() {
        let g = GroupSpec::new(Vec::new(), 2);
        assert!(matches!(k_min_orbit(&g), Err(Error::Domain(_))));
        assert!(matches!(k_by_pairs(&g), Err(Error::Domain(_))));
    }

    #[test]
    fn relative_validation() {
        assert!(RelativeDatum::from_json(r#"{"simple_roots":["a","b"],"nilradical_dims":[1,1]}"#).is_err());
        assert!(RelativeDatum::from_json(r#"{"simple_roots":["a"],"nilradical_dims":[0]}"#).is_err());
        let err = RelativeDatum::from_json("{\n  \"simple_roots\": [\"a\"],\n  oops").unwrap_err();
        assert!(matches!(err, Error::Parse { offset, .. } if offset > 20));
        let two = RelativeDatum::from_json(
            r#"{"simple_roots":["a","b"],"nilradical_dims":[1,2],
                "positive_roots":[[1,1],[1,2]],"positive_root_dims":[1,1]}"#,
        )
        .unwrap();
        assert_eq!(two.dim_unipotent_radical(&[0]), 2 + 1 + 1);
        assert_eq!(two.dim_unipotent_radical(&[1]), 1 + 1 + 1);
    }

    #[test]
    fn rank_guard() {
        let g = spec(&[(Series::A, 9)]);
        assert!(matches!(k_by_pairs(&g), Err(Error::Resource(_))));
        assert_eq!(k_report(&g).unwrap().k, int(9));
    }
}
