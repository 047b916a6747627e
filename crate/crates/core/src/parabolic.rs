//! Parabolic subsets of a root system and the Levi bookkeeping built on them.
//!
//! A parabolic subgroup containing the maximal split torus is modelled by a
//! closed subset `S` of roots with `S ∪ -S = R`; its Levi component is the
//! symmetric part `S ∩ -S` and its unipotent radical the remaining roots.
//! All parabolic subsets are obtained as Weyl-orbits of the standard ones,
//! which is how [`enumerate_parabolic_subsets`] works.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exact::{integer_rank, Matrix};
use crate::root_datum::RootSystem;

/// Largest semisimple rank for which full parabolic enumeration is attempted.
pub const ENUMERATION_RANK_LIMIT: usize = 6;
/// Largest tuple length accepted by [`count_contributing_tuples`].
pub const TUPLE_LENGTH_LIMIT: usize = 8;

/// Set of root indices of a fixed [`RootSystem`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RootSet {
    words: Vec<u64>,
}

impl RootSet {
    pub fn empty(n: usize) -> Self {
        RootSet {
            words: vec![0; n.div_ceil(64)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        (0..n).for_each(|i| s.insert(i));
        s
    }

    pub fn from_indices(n: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        indices.into_iter().for_each(|i| s.insert(i));
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &RootSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &RootSet) -> RootSet {
        RootSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &RootSet) -> RootSet {
        RootSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// Indices in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Image under a permutation of root indices.
    pub fn permute(&self, perm: &[usize]) -> RootSet {
        RootSet::from_indices(perm.len(), self.iter().map(|i| perm[i]))
    }

    fn negate(&self, rs: &RootSystem) -> RootSet {
        RootSet::from_indices(rs.len(), self.iter().map(|i| rs.negation(i)))
    }
}

impl fmt::Debug for RootSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Canonical ordering: lexicographic on the sorted member index lists.
fn canonical_cmp(a: &RootSet, b: &RootSet) -> std::cmp::Ordering {
    a.iter().cmp(b.iter())
}

/// `alpha, beta in S` and `alpha + beta` a root imply `alpha + beta in S`.
pub fn is_closed(rs: &RootSystem, set: &RootSet) -> bool {
    let members = set.to_vec();
    let mut sum = vec![0; rs.rank()];
    for &a in &members {
        for &b in &members {
            for (k, s) in sum.iter_mut().enumerate() {
                *s = rs.root(a)[k] + rs.root(b)[k];
            }
            if let Some(c) = rs.index_of(&sum) {
                if !set.contains(c) {
                    return false;
                }
            }
        }
    }
    true
}

/// A closed subset of roots containing a positive system's worth of roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParabolicSubset {
    members: RootSet,
}

impl ParabolicSubset {
    /// Validate that `members` is closed and that `members ∪ -members` is everything.
    pub fn new(rs: &RootSystem, members: RootSet) -> Result<Self> {
        if members.union(&members.negate(rs)) != RootSet::full(rs.len()) {
            return Err(Error::domain("subset does not meet every pair ±α"));
        }
        if !is_closed(rs, &members) {
            return Err(Error::domain("subset is not closed under root addition"));
        }
        Ok(ParabolicSubset { members })
    }

    /// Standard parabolic `R+ ∪ (roots in the span of the simple roots in J)`.
    pub fn standard(rs: &RootSystem, simple_subset: &[usize]) -> Self {
        let mut members = RootSet::from_indices(rs.len(), 0..rs.num_positive());
        for k in rs.positive_roots_in_span(simple_subset) {
            members.insert(rs.negation(k));
        }
        ParabolicSubset { members }
    }

    pub fn whole(rs: &RootSystem) -> Self {
        ParabolicSubset {
            members: RootSet::full(rs.len()),
        }
    }

    pub fn members(&self) -> &RootSet {
        &self.members
    }

    pub fn opposite(&self, rs: &RootSystem) -> Self {
        ParabolicSubset {
            members: self.members.negate(rs),
        }
    }

    pub fn is_whole(&self, rs: &RootSystem) -> bool {
        self.members.len() == rs.len()
    }
}

/// Levi component of a parabolic subset, with `dim a_M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LeviDatum {
    levi_roots: RootSet,
    a_m_dim: usize,
}

impl LeviDatum {
    /// Levi datum of a symmetric closed root subset, checked to be the Levi of
    /// some parabolic subset (equivalently: closed, symmetric and equal to the
    /// roots in its own linear span).
    pub fn new(rs: &RootSystem, levi_roots: RootSet) -> Result<Self> {
        if levi_roots.negate(rs) != levi_roots {
            return Err(Error::domain("Levi root set is not symmetric"));
        }
        let vectors: Vec<Vec<i64>> = levi_roots.iter().map(|i| rs.ambient_vector(i)).collect();
        let rank = integer_rank(&vectors);
        for k in 0..rs.len() {
            if levi_roots.contains(k) {
                continue;
            }
            let mut with = vectors.clone();
            with.push(rs.ambient_vector(k));
            if integer_rank(&with) == rank {
                return Err(Error::domain(
                    "root set is not cut out by its linear span, so it is not a Levi",
                ));
            }
        }
        Ok(LeviDatum {
            levi_roots,
            a_m_dim: rs.ambient_dim() - rank,
        })
    }

    pub fn minimal(rs: &RootSystem) -> Self {
        LeviDatum {
            levi_roots: RootSet::empty(rs.len()),
            a_m_dim: rs.ambient_dim(),
        }
    }

    pub fn whole(rs: &RootSystem) -> Self {
        LeviDatum {
            levi_roots: RootSet::full(rs.len()),
            a_m_dim: rs.torus_rank(),
        }
    }

    /// Levi of the standard parabolic attached to a set of simple roots.
    pub fn standard(rs: &RootSystem, simple_subset: &[usize]) -> Self {
        levi_of(rs, &ParabolicSubset::standard(rs, simple_subset))
    }

    pub fn levi_roots(&self) -> &RootSet {
        &self.levi_roots
    }

    pub fn a_m_dim(&self) -> usize {
        self.a_m_dim
    }

    /// `dim a_M^G = dim a_M - dim a_G`.
    pub fn a_m_g_dim(&self, rs: &RootSystem) -> usize {
        self.a_m_dim - rs.torus_rank()
    }

    pub fn contains(&self, other: &LeviDatum) -> bool {
        other.levi_roots.is_subset(&self.levi_roots)
    }
}

pub fn levi_of(rs: &RootSystem, p: &ParabolicSubset) -> LeviDatum {
    let levi_roots = p.members.intersection(&p.members.negate(rs));
    let vectors: Vec<Vec<i64>> = levi_roots.iter().map(|i| rs.ambient_vector(i)).collect();
    LeviDatum {
        a_m_dim: rs.ambient_dim() - integer_rank(&vectors),
        levi_roots,
    }
}

/// `dim V_P`: number of members whose negative is not a member.
pub fn dim_unipotent_radical(rs: &RootSystem, p: &ParabolicSubset) -> usize {
    p.members
        .iter()
        .filter(|&i| !p.members.contains(rs.negation(i)))
        .count()
}

/// All parabolic subsets, canonically ordered. Each is a Weyl translate of
/// exactly one standard parabolic, so the orbits of the standard ones under
/// the simple reflections exhaust the set.
pub fn enumerate_parabolic_subsets(rs: &RootSystem) -> Result<Vec<ParabolicSubset>> {
    if rs.rank() > ENUMERATION_RANK_LIMIT {
        return Err(Error::resource(format!(
            "parabolic enumeration is limited to semisimple rank {ENUMERATION_RANK_LIMIT}, got {}",
            rs.rank()
        )));
    }
    let reflections: Vec<Vec<usize>> = (0..rs.rank()).map(|i| rs.simple_reflection(i)).collect();
    let mut seen: HashSet<RootSet> = HashSet::new();
    let mut out: Vec<RootSet> = Vec::new();
    for mask in 0u32..(1 << rs.rank()) {
        let subset: Vec<usize> = (0..rs.rank()).filter(|i| mask >> i & 1 == 1).collect();
        let start = ParabolicSubset::standard(rs, &subset).members;
        if !seen.insert(start.clone()) {
            continue;
        }
        let mut queue = vec![start];
        while let Some(cur) = queue.pop() {
            for s in &reflections {
                let img = cur.permute(s);
                if seen.insert(img.clone()) {
                    queue.push(img);
                }
            }
            out.push(cur);
        }
    }
    out.sort_by(canonical_cmp);
    Ok(out
        .into_iter()
        .map(|members| ParabolicSubset { members })
        .collect())
}

/// The sets `F(M)`, `L(M)` and the partition of `F(M)` into the `P(L)`.
#[derive(Clone, Debug)]
pub struct FSets {
    pub parabolics: Vec<ParabolicSubset>,
    pub levis: Vec<LeviDatum>,
    /// `(L, P(L))`, in the same order as `levis`.
    pub by_levi: Vec<(LeviDatum, Vec<ParabolicSubset>)>,
}

pub fn f_sets(rs: &RootSystem, m: &LeviDatum) -> Result<FSets> {
    let all = enumerate_parabolic_subsets(rs)?;
    f_sets_from(rs, m, &all)
}

/// [`f_sets`] against a precomputed list of all parabolic subsets.
pub fn f_sets_from(rs: &RootSystem, m: &LeviDatum, all: &[ParabolicSubset]) -> Result<FSets> {
    let parabolics: Vec<ParabolicSubset> = all
        .iter()
        .filter(|p| m.levi_roots.is_subset(&p.members))
        .cloned()
        .collect();
    if !parabolics.iter().any(|p| levi_of(rs, p).levi_roots == m.levi_roots) {
        return Err(Error::domain("M is not the Levi of any parabolic subset"));
    }
    let mut groups: BTreeMap<Vec<usize>, (LeviDatum, Vec<ParabolicSubset>)> = BTreeMap::new();
    for p in &parabolics {
        let l = levi_of(rs, p);
        groups
            .entry(l.levi_roots.to_vec())
            .or_insert_with(|| (l, Vec::new()))
            .1
            .push(p.clone());
    }
    let by_levi: Vec<_> = groups.into_values().collect();
    let levis = by_levi.iter().map(|(l, _)| l.clone()).collect();
    Ok(FSets {
        parabolics,
        levis,
        by_levi,
    })
}

/// Every Levi subset of the root system (symmetric parts of all parabolics).
pub fn all_levis(rs: &RootSystem) -> Result<Vec<LeviDatum>> {
    Ok(f_sets(rs, &LeviDatum::minimal(rs))?.levis)
}

/// Basis (rows) of `a_M^L`: the part of `a_M` orthogonal to `a_L` under the
/// invariant form.
fn a_m_l_basis(rs: &RootSystem, m: &LeviDatum, l: &LeviDatum) -> Matrix {
    let form = Matrix::from_integer_rows(&rs.ambient_form());
    let functionals = |set: &RootSet| -> Vec<Vec<crate::exact::Q>> {
        let rows: Vec<Vec<i64>> = set.iter().map(|i| rs.ambient_vector(i)).collect();
        if rows.is_empty() {
            return Vec::new();
        }
        Matrix::from_integer_rows(&rows).mul(&form).to_rows()
    };
    let nullspace = |rows: Vec<Vec<crate::exact::Q>>| -> Matrix {
        if rows.is_empty() {
            Matrix::identity(rs.ambient_dim())
        } else {
            Matrix::from_rows(rows).expect("rectangular").nullspace()
        }
    };
    // a_L = {H : (alpha, H) = 0 for alpha in L}
    let a_l = nullspace(functionals(&l.levi_roots));
    let mut constraints = functionals(&m.levi_roots);
    if a_l.rows() > 0 {
        constraints.extend(a_l.mul(&form).to_rows());
    }
    nullspace(constraints)
}

/// Non-vanishing predicate for the splitting constants `d_M^G(L1, L2)`:
/// `a_M^{L1} ⊕ a_M^{L2} -> a_M^G` must be an isomorphism.
pub fn d_nonvanishing(rs: &RootSystem, m: &LeviDatum, l1: &LeviDatum, l2: &LeviDatum) -> Result<bool> {
    if !l1.contains(m) || !l2.contains(m) {
        return Err(Error::domain("M must be contained in both L1 and L2"));
    }
    let b1 = a_m_l_basis(rs, m, l1);
    let b2 = a_m_l_basis(rs, m, l2);
    let target = m.a_m_g_dim(rs);
    if b1.rows() + b2.rows() != target {
        return Ok(false);
    }
    if target == 0 {
        return Ok(true);
    }
    let mut rows = b1.to_rows();
    rows.extend(b2.to_rows());
    Ok(Matrix::from_rows(rows).expect("same width").rank() == target)
}

/// Number of tuples in `L(M)^s` with at most `dim a_M^G` entries different
/// from `M`.
pub fn count_contributing_tuples(rs: &RootSystem, m: &LeviDatum, s_size: usize) -> Result<u128> {
    if s_size > TUPLE_LENGTH_LIMIT {
        return Err(Error::resource(format!(
            "tuple length is limited to {TUPLE_LENGTH_LIMIT}, got {s_size}"
        )));
    }
    let levis = f_sets(rs, m)?.levis.len() as u128;
    contributing_tuple_count(s_size, m.a_m_g_dim(rs), levis)
}

/// `sum_{j <= min(s, d)} C(s, j) (|L| - 1)^j`.
pub fn contributing_tuple_count(s_size: usize, dim: usize, num_levis: u128) -> Result<u128> {
    let overflow = || Error::resource("tuple count overflows 128 bits");
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for j in 0..=s_size.min(dim) {
        if j > 0 {
            binom = binom * (s_size - j + 1) as u128 / j as u128;
        }
        let pow = (num_levis.saturating_sub(1))
            .checked_pow(j as u32)
            .ok_or_else(overflow)?;
        total = binom
            .checked_mul(pow)
            .and_then(|t| total.checked_add(t))
            .ok_or_else(overflow)?;
    }
    Ok(total)
}

/// The crude bound `s^d |L(M)|^d` on contributing tuples.
pub fn tuple_bound(s_size: usize, dim: usize, num_levis: u128) -> Option<u128> {
    (s_size as u128)
        .checked_pow(dim as u32)?
        .checked_mul(num_levis.checked_pow(dim as u32)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_datum::{build_root_system, Series, SimpleType};

    fn sys(spec: &[(Series, usize)]) -> RootSystem {
        let f: Vec<_> = spec.iter().map(|&(s, l)| SimpleType::new(s, l).unwrap()).collect();
        build_root_system(&f, 0).unwrap()
    }

    #[test]
    fn parabolic_counts() {
        assert_eq!(enumerate_parabolic_subsets(&sys(&[(Series::A, 1)])).unwrap().len(), 3);
        assert_eq!(enumerate_parabolic_subsets(&sys(&[(Series::A, 2)])).unwrap().len(), 13);
        assert_eq!(
            enumerate_parabolic_subsets(&sys(&[(Series::A, 1), (Series::A, 1)])).unwrap().len(),
            9
        );
    }

    #[test]
    fn rank_guard() {
        let e7 = sys(&[(Series::E, 7)]);
        assert!(matches!(enumerate_parabolic_subsets(&e7), Err(Error::Resource(_))));
    }

    #[test]
    fn levi_examples() {
        let a2 = sys(&[(Series::A, 2)]);
        let g = levi_of(&a2, &ParabolicSubset::whole(&a2));
        assert_eq!(g.a_m_dim(), 0);
        assert_eq!(g.levi_roots().len(), 6);
        let borel = ParabolicSubset::standard(&a2, &[]);
        let m0 = levi_of(&a2, &borel);
        assert!(m0.levi_roots().is_empty());
        assert_eq!(m0.a_m_dim(), 2);
        let p1 = ParabolicSubset::standard(&a2, &[0]);
        let l1 = levi_of(&a2, &p1);
        assert_eq!(l1.levi_roots().to_vec(), vec![0, 3]);
        assert_eq!(l1.a_m_dim(), 1);
    }

    #[test]
    fn unipotent_radical_dims() {
        let a2 = sys(&[(Series::A, 2)]);
        assert_eq!(dim_unipotent_radical(&a2, &ParabolicSubset::standard(&a2, &[])), 3);
        assert_eq!(dim_unipotent_radical(&a2, &ParabolicSubset::whole(&a2)), 0);
        let a3 = sys(&[(Series::A, 3)]);
        assert_eq!(dim_unipotent_radical(&a3, &ParabolicSubset::standard(&a3, &[0, 2])), 4);
    }

    #[test]
    fn f_set_sizes() {
        let a2 = sys(&[(Series::A, 2)]);
        let fs = f_sets(&a2, &LeviDatum::minimal(&a2)).unwrap();
        assert_eq!(fs.parabolics.len(), 13);
        assert_eq!(fs.levis.len(), 5);
        let p_m0 = fs
            .by_levi
            .iter()
            .find(|(l, _)| l.levi_roots().is_empty())
            .unwrap();
        assert_eq!(p_m0.1.len(), 6);

        let full = f_sets(&a2, &LeviDatum::whole(&a2)).unwrap();
        assert_eq!(full.parabolics.len(), 1);
        assert_eq!(full.levis.len(), 1);

        let a1a1 = sys(&[(Series::A, 1), (Series::A, 1)]);
        let fs = f_sets(&a1a1, &LeviDatum::minimal(&a1a1)).unwrap();
        assert_eq!((fs.parabolics.len(), fs.levis.len()), (9, 4));
    }

    #[test]
    fn f_sets_rejects_non_levi() {
        let a2 = sys(&[(Series::A, 2)]);
        // {±alpha_1, ±alpha_2} is symmetric but its span contains alpha_1+alpha_2.
        let bogus = LeviDatum {
            levi_roots: RootSet::from_indices(6, [0, 1, 3, 4]),
            a_m_dim: 0,
        };
        assert!(f_sets(&a2, &bogus).is_err());
        assert!(LeviDatum::new(&a2, RootSet::from_indices(6, [0, 1, 3, 4])).is_err());
        assert!(LeviDatum::new(&a2, RootSet::from_indices(6, [0, 3])).is_ok());
    }

    #[test]
    fn d_nonvanishing_examples() {
        let a2 = sys(&[(Series::A, 2)]);
        let g = LeviDatum::whole(&a2);
        let m0 = LeviDatum::minimal(&a2);
        assert!(d_nonvanishing(&a2, &g, &g, &g).unwrap());
        assert!(!d_nonvanishing(&a2, &m0, &m0, &m0).unwrap());
        let l1 = LeviDatum::standard(&a2, &[0]);
        let l2 = LeviDatum::standard(&a2, &[1]);
        assert!(d_nonvanishing(&a2, &m0, &l1, &l2).unwrap());
        assert!(!d_nonvanishing(&a2, &m0, &l1, &l1).unwrap());
        assert!(d_nonvanishing(&a2, &l1, &g, &m0).is_err());
    }

    #[test]
    fn tuple_counts() {
        let a2 = sys(&[(Series::A, 2)]);
        let m0 = LeviDatum::minimal(&a2);
        assert_eq!(count_contributing_tuples(&a2, &m0, 1).unwrap(), 5);
        assert_eq!(count_contributing_tuples(&a2, &m0, 2).unwrap(), 25);
        let g = LeviDatum::whole(&a2);
        assert_eq!(count_contributing_tuples(&a2, &g, 5).unwrap(), 1);
        assert!(matches!(
            count_contributing_tuples(&a2, &m0, 9),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn validated_constructor() {
        let a2 = sys(&[(Series::A, 2)]);
        assert!(ParabolicSubset::new(&a2, RootSet::from_indices(6, 0..3)).is_ok());
        // {alpha_1, alpha_2} misses ±(alpha_1+alpha_2).
        assert!(ParabolicSubset::new(&a2, RootSet::from_indices(6, [0, 1, 3, 4])).is_err());
        // alpha_1, alpha_2, -alpha_1-alpha_2 meets every pair but is not closed.
        assert!(ParabolicSubset::new(&a2, RootSet::from_indices(6, [0, 1, 5])).is_err());
    }
}
