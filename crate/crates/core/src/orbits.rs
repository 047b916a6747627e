//! Nilpotent (equivalently unipotent) orbits and their dimensions.
//!
//! Classical orbits are labelled by partitions of the natural representation
//! dimension subject to the usual parity rules. Exceptional types only carry
//! the trivial and minimal labels, whose dimensions are `0` and `2(h^v - 1)`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::root_datum::{dual_coxeter_number, Series, SimpleType};

/// Largest rank accepted by [`list_orbits`].
pub const ORBIT_RANK_LIMIT: usize = 20;

/// The Lie algebra an orbit label lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OrbitType {
    /// `gl(n)`.
    Gl(usize),
    Simple(SimpleType),
}

impl OrbitType {
    /// Dimension of the natural representation for classical algebras.
    pub fn natural_dim(self) -> Option<usize> {
        match self {
            OrbitType::Gl(n) => Some(n),
            OrbitType::Simple(t) => match t.series() {
                Series::A => Some(t.rank() + 1),
                Series::B => Some(2 * t.rank() + 1),
                Series::C | Series::D => Some(2 * t.rank()),
                _ => None,
            },
        }
    }

    pub fn lie_algebra_dim(self) -> usize {
        match self {
            OrbitType::Gl(n) => n * n,
            OrbitType::Simple(t) => {
                let l = t.rank();
                t.root_count() + l
            }
        }
    }

    fn rank(self) -> usize {
        match self {
            OrbitType::Gl(n) => n,
            OrbitType::Simple(t) => t.rank(),
        }
    }
}

impl fmt::Display for OrbitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitType::Gl(n) => write!(f, "gl{n}"),
            OrbitType::Simple(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum OrbitKind {
    /// Parts in weakly decreasing order.
    Partition(Vec<usize>),
    Trivial,
    Minimal,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrbitLabel {
    pub kind: OrbitKind,
    pub attached: OrbitType,
    /// Type D partition with only even parts: one label, two orbits of equal dimension.
    pub very_even: bool,
}

impl OrbitLabel {
    pub fn partition(attached: OrbitType, mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts.retain(|&p| p > 0);
        let n = attached.natural_dim().ok_or_else(|| {
            Error::domain(format!("{attached} has no partition-labelled orbits"))
        })?;
        if parts.iter().sum::<usize>() != n {
            return Err(Error::domain(format!("{parts:?} is not a partition of {n}")));
        }
        let series = match attached {
            OrbitType::Gl(_) => Series::A,
            OrbitType::Simple(t) => t.series(),
        };
        if !satisfies_parity(series, &parts) {
            return Err(Error::domain(format!(
                "{parts:?} violates the parity rule for {attached}"
            )));
        }
        let very_even = series == Series::D && parts.iter().all(|p| p % 2 == 0);
        Ok(OrbitLabel {
            kind: OrbitKind::Partition(parts),
            attached,
            very_even,
        })
    }

    pub fn trivial(attached: OrbitType) -> Self {
        OrbitLabel {
            kind: OrbitKind::Trivial,
            attached,
            very_even: false,
        }
    }

    pub fn minimal(t: SimpleType) -> Self {
        OrbitLabel {
            kind: OrbitKind::Minimal,
            attached: OrbitType::Simple(t),
            very_even: false,
        }
    }

    pub fn is_trivial(&self) -> bool {
        match &self.kind {
            OrbitKind::Trivial => true,
            OrbitKind::Minimal => false,
            OrbitKind::Partition(p) => p.iter().all(|&x| x == 1),
        }
    }
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            OrbitKind::Trivial => write!(f, "trivial"),
            OrbitKind::Minimal => write!(f, "minimal"),
            OrbitKind::Partition(p) => {
                let parts: Vec<String> = p.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

fn satisfies_parity(series: Series, parts: &[usize]) -> bool {
    let multiplicity = |v: usize| parts.iter().filter(|&&p| p == v).count();
    match series {
        Series::A => true,
        // so(m): even parts occur with even multiplicity
        Series::B | Series::D => parts
            .iter()
            .all(|&p| p % 2 == 1 || multiplicity(p) % 2 == 0),
        // sp(2l): odd parts occur with even multiplicity
        Series::C => parts
            .iter()
            .all(|&p| p % 2 == 0 || multiplicity(p) % 2 == 0),
        _ => false,
    }
}

/// All partitions of `n` with parts in weakly decreasing order, listed in
/// decreasing lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

pub fn transpose_partition(parts: &[usize]) -> Vec<usize> {
    let largest = parts.first().copied().unwrap_or(0);
    (1..=largest)
        .map(|k| parts.iter().filter(|&&p| p >= k).count())
        .collect()
}

/// Every orbit label of a classical algebra, each exactly once.
pub fn list_orbits(attached: OrbitType) -> Result<Vec<OrbitLabel>> {
    if let OrbitType::Simple(t) = attached {
        if !t.series().is_classical() {
            return Err(Error::domain(format!(
                "orbit lists are only available for classical types; use min_orbit_dim for {t}"
            )));
        }
    }
    if attached.rank() > ORBIT_RANK_LIMIT {
        return Err(Error::resource(format!(
            "orbit enumeration is limited to rank {ORBIT_RANK_LIMIT}"
        )));
    }
    let n = attached.natural_dim().expect("classical");
    partitions(n)
        .into_iter()
        .filter_map(|p| OrbitLabel::partition(attached, p).ok())
        .map(Ok)
        .collect()
}

/// Orbit dimension from the transpose-partition formulas:
/// `gl(n)`: `n^2 - sum (λ^t_i)^2`;
/// `so(m)`: `m(m-1)/2 - (sum (λ^t_i)^2 - #{odd parts})/2`;
/// `sp(2l)`: `2l^2 + l - (sum (λ^t_i)^2 + #{odd parts})/2`.
pub fn orbit_dim(label: &OrbitLabel) -> usize {
    let parts = match &label.kind {
        OrbitKind::Trivial => return 0,
        OrbitKind::Minimal => match label.attached {
            OrbitType::Simple(t) => return min_orbit_dim(t),
            OrbitType::Gl(n) => return 2 * n - 2,
        },
        OrbitKind::Partition(p) => p,
    };
    let squares: usize = transpose_partition(parts).iter().map(|c| c * c).sum();
    let odd = parts.iter().filter(|&&p| p % 2 == 1).count();
    let series = match label.attached {
        OrbitType::Gl(_) => Series::A,
        OrbitType::Simple(t) => t.series(),
    };
    let n = label.attached.natural_dim().expect("partition labels are classical");
    match series {
        Series::A => n * n - squares,
        Series::B | Series::D => n * (n - 1) / 2 - (squares - odd) / 2,
        Series::C => n * n / 2 + n / 2 - (squares + odd) / 2,
        _ => unreachable!(),
    }
}

/// Dimension of the minimal nonzero nilpotent orbit, `2(h^v - 1)`.
pub fn min_orbit_dim(t: SimpleType) -> usize {
    2 * (dual_coxeter_number(t) as usize - 1)
}

/// Dimension of `Ind_M^G O` from `dim O` and `dim V_P`.
pub fn induced_dim(orbit_dim_in_levi: usize, dim_v_p: usize) -> usize {
    orbit_dim_in_levi + 2 * dim_v_p
}

/// Orbit labels used for a simple factor of a Levi during pair enumeration:
/// every partition label for classical types, the trivial label (and the
/// minimal one when `include_minimal`) for exceptional types.
pub fn factor_labels(t: SimpleType, include_minimal: bool) -> Vec<OrbitLabel> {
    if t.series().is_classical() {
        list_orbits(OrbitType::Simple(t)).expect("classical rank within limit")
    } else {
        let mut v = vec![OrbitLabel::trivial(OrbitType::Simple(t))];
        if include_minimal {
            v.push(OrbitLabel::minimal(t));
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(attached: OrbitType) -> Vec<Vec<usize>> {
        list_orbits(attached)
            .unwrap()
            .into_iter()
            .map(|l| match l.kind {
                OrbitKind::Partition(p) => p,
                _ => unreachable!(),
            })
            .collect()
    }

    fn c(l: usize) -> OrbitType {
        OrbitType::Simple(SimpleType::new(Series::C, l).unwrap())
    }

    #[test]
    fn gl_lists() {
        assert_eq!(labels(OrbitType::Gl(2)), vec![vec![2], vec![1, 1]]);
        assert_eq!(labels(OrbitType::Gl(3)), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn sp4_list() {
        assert_eq!(
            labels(c(2)),
            vec![vec![4], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]]
        );
    }

    #[test]
    fn very_even_flag() {
        let d4 = OrbitType::Simple(SimpleType::new(Series::D, 4).unwrap());
        let all = list_orbits(d4).unwrap();
        let flagged: Vec<String> = all.iter().filter(|l| l.very_even).map(|l| l.to_string()).collect();
        assert_eq!(flagged, vec!["[4,4]", "[2,2,2,2]"]);
    }

    #[test]
    fn exceptional_lists_are_refused() {
        let e6 = OrbitType::Simple(SimpleType::new(Series::E, 6).unwrap());
        assert!(matches!(list_orbits(e6), Err(Error::Domain(_))));
        assert!(matches!(list_orbits(OrbitType::Gl(21)), Err(Error::Resource(_))));
    }

    #[test]
    fn gl_dimensions() {
        for n in 1..=8 {
            let trivial = OrbitLabel::partition(OrbitType::Gl(n), vec![1; n]).unwrap();
            assert_eq!(orbit_dim(&trivial), 0);
            let regular = OrbitLabel::partition(OrbitType::Gl(n), vec![n]).unwrap();
            assert_eq!(orbit_dim(&regular), n * n - n);
            if n >= 2 {
                let mut p = vec![2];
                p.extend(vec![1; n - 2]);
                let minimal = OrbitLabel::partition(OrbitType::Gl(n), p).unwrap();
                assert_eq!(orbit_dim(&minimal), 2 * n - 2);
            }
        }
        assert_eq!(orbit_dim(&OrbitLabel::partition(OrbitType::Gl(4), vec![4]).unwrap()), 12);
    }

    #[test]
    fn min_orbit_examples() {
        let d = |l| SimpleType::new(Series::D, l).unwrap();
        for n in 2..=8 {
            assert_eq!(min_orbit_dim(SimpleType::new(Series::A, n - 1).unwrap()), 2 * n - 2);
        }
        for l in 3..=8 {
            assert_eq!(min_orbit_dim(d(l)), 4 * l - 6);
        }
        assert_eq!(min_orbit_dim(SimpleType::new(Series::G, 2).unwrap()), 6);
    }

    #[test]
    fn induced_examples() {
        assert_eq!(induced_dim(0, 1), 2);
        assert_eq!(induced_dim(7, 0), 7);
        for n in 2..=8usize {
            let regular = OrbitLabel::partition(OrbitType::Gl(n), vec![n]).unwrap();
            assert_eq!(induced_dim(0, n * (n - 1) / 2), orbit_dim(&regular));
        }
    }

    #[test]
    fn invalid_partitions_are_rejected() {
        assert!(OrbitLabel::partition(c(2), vec![3, 1]).is_err());
        assert!(OrbitLabel::partition(OrbitType::Gl(3), vec![2, 2]).is_err());
        let b2 = OrbitType::Simple(SimpleType::new(Series::B, 2).unwrap());
        assert!(OrbitLabel::partition(b2, vec![2, 1, 1, 1]).is_err());
    }
}
