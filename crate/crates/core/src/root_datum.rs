//! Root systems of the simple types and their products.
//!
//! Roots are stored as integer coordinate vectors with respect to the simple
//! roots, so the ambient lattice of a system of semisimple rank `r` with a
//! central torus of rank `t` is `Z^(r+t)`; the torus columns are identically
//! zero on roots. The invariant bilinear form is carried separately as an
//! integer Gram matrix of the simple roots, computed from the doubled
//! Bourbaki realizations so that every entry is integral.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Series {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Series {
    pub fn from_char(c: char) -> Option<Series> {
        Some(match c {
            'A' => Series::A,
            'B' => Series::B,
            'C' => Series::C,
            'D' => Series::D,
            'E' => Series::E,
            'F' => Series::F,
            'G' => Series::G,
            _ => return None,
        })
    }

    pub fn is_classical(self) -> bool {
        matches!(self, Series::A | Series::B | Series::C | Series::D)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// An irreducible Cartan type such as `A3` or `E8`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SimpleType {
    series: Series,
    rank: usize,
}

impl SimpleType {
    pub fn new(series: Series, rank: usize) -> Result<Self> {
        let ok = match series {
            Series::A | Series::B | Series::C => rank >= 1,
            Series::D => rank >= 2,
            Series::E => (6..=8).contains(&rank),
            Series::F => rank == 4,
            Series::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { series, rank })
        } else {
            Err(Error::domain(format!("no simple type {series}{rank}")))
        }
    }

    pub fn series(self) -> Series {
        self.series
    }

    pub fn rank(self) -> usize {
        self.rank
    }

    /// Number of roots of the irreducible system, from the classical tables.
    pub fn root_count(self) -> usize {
        let l = self.rank;
        match self.series {
            Series::A => l * (l + 1),
            Series::B | Series::C => 2 * l * l,
            Series::D => 2 * l * (l - 1),
            Series::E => match l {
                6 => 72,
                7 => 126,
                _ => 240,
            },
            Series::F => 48,
            Series::G => 12,
        }
    }

    /// Doubled Bourbaki realization of the simple roots (integer vectors).
    fn doubled_simple_roots(self) -> Vec<Vec<i64>> {
        let l = self.rank;
        let e = |dim: usize, i: usize, c: i64| {
            let mut v = vec![0; dim];
            v[i] = c;
            v
        };
        let diff = |dim: usize, i: usize, j: usize| {
            let mut v = vec![0; dim];
            v[i] = 2;
            v[j] = -2;
            v
        };
        match self.series {
            Series::A => (0..l).map(|i| diff(l + 1, i, i + 1)).collect(),
            Series::B | Series::C | Series::D => {
                let mut s: Vec<Vec<i64>> = (0..l - 1).map(|i| diff(l, i, i + 1)).collect();
                s.push(match self.series {
                    Series::B => e(l, l - 1, 2),
                    Series::C => e(l, l - 1, 4),
                    _ => {
                        let mut v = vec![0; l];
                        v[l - 2] = 2;
                        v[l - 1] = 2;
                        v
                    }
                });
                s
            }
            Series::G => vec![vec![2, -2, 0], vec![-4, 2, 2]],
            Series::F => vec![
                vec![0, 2, -2, 0],
                vec![0, 0, 2, -2],
                vec![0, 0, 0, 2],
                vec![1, -1, -1, -1],
            ],
            Series::E => {
                let mut s = vec![vec![1, -1, -1, -1, -1, -1, -1, 1], {
                    let mut v = vec![0; 8];
                    v[0] = 2;
                    v[1] = 2;
                    v
                }];
                for i in 0..l - 2 {
                    s.push(diff(8, i + 1, i));
                }
                s
            }
        }
    }

    /// Gram matrix of the simple roots under the (doubled) Euclidean form.
    pub fn gram(self) -> Vec<Vec<i64>> {
        let s = self.doubled_simple_roots();
        s.iter()
            .map(|a| {
                s.iter()
                    .map(|b| a.iter().zip(b).map(|(x, y)| x * y).sum())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.series, self.rank)
    }
}

/// Positive roots of an irreducible system given its Gram matrix, generated
/// by root strings: `beta + alpha_i` is a root iff `p - <beta, alpha_i^v> > 0`
/// where `p` is the length of the `alpha_i`-string below `beta`.
fn generate_positive_roots(gram: &[Vec<i64>]) -> Vec<Vec<i32>> {
    let r = gram.len();
    let pair = |beta: &[i32], i: usize| -> i64 {
        // <beta, alpha_i^v> = 2 (beta, alpha_i) / (alpha_i, alpha_i)
        let ip: i64 = (0..r).map(|j| beta[j] as i64 * gram[j][i]).sum();
        2 * ip / gram[i][i]
    };
    let mut all: Vec<Vec<i32>> = Vec::new();
    let mut known: HashMap<Vec<i32>, ()> = HashMap::new();
    let mut layer: Vec<Vec<i32>> = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect();
    while !layer.is_empty() {
        for b in &layer {
            known.insert(b.clone(), ());
        }
        all.extend(layer.iter().cloned());
        let mut next: Vec<Vec<i32>> = Vec::new();
        for beta in &layer {
            for i in 0..r {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains_key(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p as i64 - pair(beta, i);
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !known.contains_key(&up) && !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        layer = next;
    }
    all
}

/// A (possibly reducible) root system together with a central torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSystem {
    factors: Vec<SimpleType>,
    torus_rank: usize,
    gram: Vec<Vec<i64>>,
    factor_of_simple: Vec<usize>,
    roots: Vec<Vec<i32>>,
    positive_count: usize,
    index: HashMap<Vec<i32>, usize>,
}

impl RootSystem {
    pub fn factors(&self) -> &[SimpleType] {
        &self.factors
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    /// Semisimple rank (number of simple roots).
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.rank() + self.torus_rank
    }

    /// Gram matrix of the simple roots (block diagonal over factors).
    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Index of the simple factor containing simple root `i`.
    pub fn factor_of_simple(&self, i: usize) -> usize {
        self.factor_of_simple[i]
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Root coordinates in the simple-root basis, positives first (ordered by
    /// height, simple roots leading) followed by their negatives in the same order.
    pub fn roots(&self) -> &[Vec<i32>] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &[i32] {
        &self.roots[i]
    }

    pub fn num_positive(&self) -> usize {
        self.positive_count
    }

    pub fn is_positive(&self, i: usize) -> bool {
        i < self.positive_count
    }

    /// Index of `-root(i)`.
    pub fn negation(&self, i: usize) -> usize {
        if i < self.positive_count {
            i + self.positive_count
        } else {
            i - self.positive_count
        }
    }

    pub fn index_of(&self, coords: &[i32]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    /// Index of the `i`-th simple root.
    pub fn simple_index(&self, i: usize) -> usize {
        debug_assert!(i < self.rank());
        i
    }

    pub fn simple_roots(&self) -> Vec<Vec<i64>> {
        (0..self.rank()).map(|i| self.ambient_vector(i)).collect()
    }

    /// Root `i` as a vector in the ambient lattice (torus columns zero).
    pub fn ambient_vector(&self, i: usize) -> Vec<i64> {
        let mut v: Vec<i64> = self.roots[i].iter().map(|&c| c as i64).collect();
        v.resize(self.ambient_dim(), 0);
        v
    }

    pub fn height(&self, i: usize) -> i64 {
        self.roots[i].iter().map(|&c| c as i64).sum()
    }

    /// Invariant inner product of two simple-root coordinate vectors.
    pub fn inner(&self, a: &[i32], b: &[i32]) -> i64 {
        let r = self.rank();
        let mut s = 0;
        for i in 0..r {
            if a[i] == 0 {
                continue;
            }
            for j in 0..r {
                s += a[i] as i64 * self.gram[i][j] * b[j] as i64;
            }
        }
        s
    }

    /// Invariant form on the full ambient space: the Gram form on the
    /// semisimple part and the identity on the torus part.
    pub fn ambient_form(&self) -> Vec<Vec<i64>> {
        let n = self.ambient_dim();
        let r = self.rank();
        let mut m = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                m[i][j] = if i < r && j < r {
                    self.gram[i][j]
                } else if i == j {
                    1
                } else {
                    0
                };
            }
        }
        m
    }

    /// Permutation of root indices induced by the simple reflection `s_i`.
    pub fn simple_reflection(&self, i: usize) -> Vec<usize> {
        let alpha = &self.roots[i];
        let norm = self.gram[i][i];
        (0..self.len())
            .map(|k| {
                let beta = &self.roots[k];
                let c = 2 * self.inner(beta, alpha) / norm;
                let mut img = beta.clone();
                img[i] -= c as i32;
                self.index[&img]
            })
            .collect()
    }

    /// Positive roots lying in the span of the simple roots `subset`.
    pub fn positive_roots_in_span(&self, subset: &[usize]) -> Vec<usize> {
        (0..self.positive_count)
            .filter(|&k| {
                self.roots[k]
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| c == 0 || subset.contains(&j))
            })
            .collect()
    }

    /// Split a set of simple roots into connected Dynkin components and
    /// identify the Cartan type of each.
    pub fn classify_simple_subset(&self, subset: &[usize]) -> Vec<SimpleType> {
        let mut seen = vec![false; self.rank()];
        let mut out = Vec::new();
        for &start in subset {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let a = comp[k];
                for &b in subset {
                    if !seen[b] && self.gram[a][b] != 0 {
                        seen[b] = true;
                        comp.push(b);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(classify_connected(&self.gram, &comp));
        }
        out.sort();
        out
    }
}

fn classify_connected(gram: &[Vec<i64>], comp: &[usize]) -> SimpleType {
    let r = comp.len();
    let mk = |s, l| SimpleType::new(s, l).expect("connected Dynkin diagram of known type");
    if r == 1 {
        return mk(Series::A, 1);
    }
    let bond = |a: usize, b: usize| -> i64 {
        let g = gram[a][b];
        if g == 0 || a == b {
            0
        } else {
            4 * g * g / (gram[a][a] * gram[b][b])
        }
    };
    let neighbours = |a: usize| -> Vec<usize> {
        comp.iter().copied().filter(|&b| bond(a, b) > 0).collect()
    };
    let mut max_bond = 0;
    for &a in comp {
        for &b in comp {
            max_bond = max_bond.max(bond(a, b));
        }
    }
    match max_bond {
        3 => mk(Series::G, 2),
        2 => {
            if r == 2 {
                return mk(Series::B, 2);
            }
            // The diagram is a path; find the double bond.
            let (a, b) = comp
                .iter()
                .flat_map(|&a| comp.iter().map(move |&b| (a, b)))
                .find(|&(a, b)| bond(a, b) == 2)
                .unwrap();
            let (end, other) = if neighbours(a).len() == 1 {
                (a, b)
            } else if neighbours(b).len() == 1 {
                (b, a)
            } else {
                return mk(Series::F, 4);
            };
            if gram[end][end] < gram[other][other] {
                mk(Series::B, r)
            } else {
                mk(Series::C, r)
            }
        }
        _ => {
            let Some(&branch) = comp.iter().find(|&&a| neighbours(a).len() == 3) else {
                return mk(Series::A, r);
            };
            let mut arms: Vec<usize> = neighbours(branch)
                .into_iter()
                .map(|start| {
                    let (mut prev, mut cur, mut len) = (branch, start, 1);
                    loop {
                        let next: Vec<usize> =
                            neighbours(cur).into_iter().filter(|&x| x != prev).collect();
                        match next.first() {
                            Some(&n) => {
                                prev = cur;
                                cur = n;
                                len += 1;
                            }
                            None => break len,
                        }
                    }
                })
                .collect();
            arms.sort_unstable();
            match (arms[0], arms[1], arms[2]) {
                (1, 1, _) => mk(Series::D, r),
                (1, 2, 2) => mk(Series::E, 6),
                (1, 2, 3) => mk(Series::E, 7),
                (1, 2, 4) => mk(Series::E, 8),
                other => unreachable!("non-finite Dynkin diagram with arms {other:?}"),
            }
        }
    }
}

/// Build the root system of a product of simple types plus a central torus.
pub fn build_root_system(factors: &[SimpleType], torus_rank: usize) -> Result<RootSystem> {
    for (i, f) in factors.iter().enumerate() {
        SimpleType::new(f.series, f.rank)
            .map_err(|e| Error::domain(format!("factor {i} ({f}): {e}")))?;
    }
    let rank: usize = factors.iter().map(|f| f.rank).sum();
    let mut gram = vec![vec![0i64; rank]; rank];
    let mut factor_of_simple = Vec::with_capacity(rank);
    let mut positives: Vec<Vec<i32>> = Vec::new();
    let mut offset = 0;
    for (fi, f) in factors.iter().enumerate() {
        let g = f.gram();
        for i in 0..f.rank {
            for j in 0..f.rank {
                gram[offset + i][offset + j] = g[i][j];
            }
            factor_of_simple.push(fi);
        }
        for local in generate_positive_roots(&g) {
            let mut v = vec![0; rank];
            v[offset..offset + f.rank].copy_from_slice(&local);
            positives.push(v);
        }
        offset += f.rank;
    }
    // Height first, then reverse-lexicographic so simple roots come out as
    // alpha_1, alpha_2, ... in order.
    positives.sort_by(|a, b| {
        let ha: i32 = a.iter().sum();
        let hb: i32 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    let positive_count = positives.len();
    let mut roots = positives.clone();
    roots.extend(positives.iter().map(|v| v.iter().map(|c| -c).collect::<Vec<_>>()));
    let index = roots
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), i))
        .collect();
    Ok(RootSystem {
        factors: factors.to_vec(),
        torus_rank,
        gram,
        factor_of_simple,
        roots,
        positive_count,
        index,
    })
}

/// Root indices of the positive roots, in storage order.
pub fn positive_roots(rs: &RootSystem) -> Vec<Vec<i32>> {
    rs.roots[..rs.positive_count].to_vec()
}

/// Coordinates of the highest root of a simple type.
pub fn highest_root(t: SimpleType) -> Vec<i32> {
    let g = t.gram();
    let pos = generate_positive_roots(&g);
    pos.into_iter()
        .max_by_key(|v| v.iter().sum::<i32>())
        .expect("nonempty root system")
}

/// Dual Coxeter number `1 + sum_i a_i^v`, where the coroot of the highest
/// root is `sum_i a_i^v alpha_i^v`. For the reducible `D2 = A1 x A1` the
/// common value 2 of its two factors is returned.
pub fn dual_coxeter_number(t: SimpleType) -> u64 {
    if t.series == Series::D && t.rank == 2 {
        return 2;
    }
    let g = t.gram();
    let theta = highest_root(t);
    let theta_norm: i64 = (0..t.rank)
        .flat_map(|i| (0..t.rank).map(move |j| (i, j)))
        .map(|(i, j)| theta[i] as i64 * g[i][j] * theta[j] as i64)
        .sum();
    // a_i^v = c_i |alpha_i|^2 / |theta|^2, always integral.
    let sum: i64 = (0..t.rank)
        .map(|i| {
            let num = theta[i] as i64 * g[i][i];
            debug_assert_eq!(num % theta_norm, 0);
            num / theta_norm
        })
        .sum();
    1 + sum as u64
}

/// Closed-form table of dual Coxeter numbers.
pub fn dual_coxeter_table(t: SimpleType) -> u64 {
    let l = t.rank as u64;
    match t.series {
        Series::A => l + 1,
        Series::B => 2 * l - 1,
        Series::C => l + 1,
        Series::D => 2 * l - 2,
        Series::E => match l {
            6 => 12,
            7 => 18,
            _ => 30,
        },
        Series::F => 9,
        Series::G => 4,
    }
}

/// Every simple type of rank at most `max_rank`.
pub fn simple_types_up_to(max_rank: usize) -> Vec<SimpleType> {
    let mut out = Vec::new();
    for l in 1..=max_rank {
        for s in [Series::A, Series::B, Series::C, Series::D, Series::E, Series::F, Series::G] {
            if let Ok(t) = SimpleType::new(s, l) {
                out.push(t);
            }
        }
    }
    out
}
