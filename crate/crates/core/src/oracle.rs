//! Slow, independent reference computations used to cross-check the main
//! routines.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::exact::{Matrix, Q};
use crate::local_data::{adjoint_matrix, RationalMatrix};
use crate::parabolic::{is_closed, RootSet};
use crate::root_datum::RootSystem;

/// Largest root count accepted by [`brute_force_parabolic_count`].
pub const BRUTE_FORCE_ROOT_LIMIT: usize = 24;

/// Number of closed subsets `S` with `S ∪ -S = R`, by running over all pairs
/// `{a, -a}` and choosing `a`, `-a` or both.
pub fn brute_force_parabolic_count(rs: &RootSystem) -> Option<u64> {
    if rs.len() > BRUTE_FORCE_ROOT_LIMIT {
        return None;
    }
    let pairs = rs.num_positive();
    let mut count = 0;
    let mut choice = vec![0u8; pairs];
    loop {
        let mut set = RootSet::empty(rs.len());
        for (i, &c) in choice.iter().enumerate() {
            if c != 1 {
                set.insert(i);
            }
            if c != 0 {
                set.insert(rs.negation(i));
            }
        }
        if is_closed(rs, &set) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == pairs {
                return Some(count);
            }
            choice[k] += 1;
            if choice[k] < 3 {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// `|SL(n, Z/N)|` by running over the first `n - 1` rows and counting last
/// rows with determinant 1: the determinant is linear in the last row with
/// cofactor vector `c`, so there are `N^{n-1}` solutions when
/// `gcd(c, N) = 1` and none otherwise.
pub fn sl_order_by_rows(n: usize, level: u64) -> u128 {
    if level == 1 {
        return 1;
    }
    let m = level as i64;
    let cells = (n - 1) * n;
    let mut top = vec![0i64; cells];
    let per_good = (level as u128).pow(n as u32 - 1);
    let mut total = 0u128;
    loop {
        let mut g = m;
        for j in 0..n {
            let c = cofactor(&top, n, j, m);
            g = g.gcd(&c);
            if g == 1 {
                break;
            }
        }
        if g == 1 {
            total += per_good;
        }
        let mut k = 0;
        loop {
            if k == cells {
                return total;
            }
            top[k] += 1;
            if top[k] < m {
                break;
            }
            top[k] = 0;
            k += 1;
        }
    }
}

/// Signed cofactor of entry `(n-1, j)` modulo `m`.
fn cofactor(top: &[i64], n: usize, j: usize, m: i64) -> i64 {
    let minor: Vec<i64> = (0..n - 1)
        .flat_map(|r| (0..n).filter(move |&c| c != j).map(move |c| top[r * n + c]))
        .collect();
    let d = det_mod(&minor, n - 1, m);
    let sign = if (n - 1 + j).is_multiple_of(2) { 1 } else { -1 };
    (sign * d).rem_euclid(m)
}

fn det_mod(a: &[i64], k: usize, m: i64) -> i64 {
    match k {
        0 => 1,
        1 => a[0].rem_euclid(m),
        _ => {
            let mut s = 0i64;
            for c in 0..k {
                let minor: Vec<i64> = (1..k)
                    .flat_map(|r| (0..k).filter(move |&x| x != c).map(move |x| a[r * k + x]))
                    .collect();
                let term = a[c] * det_mod(&minor, k - 1, m) % m;
                s = if c % 2 == 0 { s + term } else { s - term }.rem_euclid(m);
            }
            s
        }
    }
}

/// `|SL(n, Z/N)|` by enumerating every matrix.
pub fn sl_order_full(n: usize, level: u64) -> u128 {
    let m = level as i64;
    let cells = n * n;
    let mut a = vec![0i64; cells];
    let mut total = 0u128;
    loop {
        if det_mod(&a, n, m) == 1 % m {
            total += 1;
        }
        let mut k = 0;
        loop {
            if k == cells {
                return total;
            }
            a[k] += 1;
            if a[k] < m {
                break;
            }
            a[k] = 0;
            k += 1;
        }
    }
}

/// `prod_{i != j, l_i != l_j} (1 - l_i / l_j)` for a diagonal matrix.
pub fn diagonal_discriminant(diag: &[Q]) -> Q {
    let mut prod = Q::one();
    for (i, a) in diag.iter().enumerate() {
        for (j, b) in diag.iter().enumerate() {
            if i != j && a != b {
                prod *= Q::one() - a / b;
            }
        }
    }
    prod
}

/// `det(1 - Ad g)` restricted to the image of `Ad g - 1`, which is an
/// invariant complement of the centralizer for semisimple `g`.
pub fn complement_discriminant(g: &RationalMatrix) -> Option<Q> {
    let ad = adjoint_matrix(g).ok()?;
    let n2 = ad.rows();
    let a = Matrix::identity(n2).sub(&ad);
    // basis of the column space of a
    let (_, pivots) = a.rref();
    let k = pivots.len();
    if k == 0 {
        return Some(Q::one());
    }
    let basis: Vec<Vec<Q>> = pivots
        .iter()
        .map(|&c| (0..n2).map(|r| a[(r, c)].clone()).collect())
        .collect();
    // coordinates of a * b_i in the basis, solved through the normal equations
    let bmat = Matrix::from_rows(basis.clone()).ok()?.transpose();
    let gram = bmat.transpose().mul(&bmat);
    let gram_inv = gram.inverse()?;
    let images = a.mul(&bmat);
    let coords = gram_inv.mul(&bmat.transpose()).mul(&images);
    if !bmat.mul(&coords).sub(&images).is_zero() {
        return None;
    }
    let d = coords.det();
    if d.is_zero() {
        None
    } else {
        Some(d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::root_datum::{build_root_system, Series, SimpleType};

    #[test]
    fn closed_subset_counts() {
        let t = |s, l| SimpleType::new(s, l).unwrap();
        let a2 = build_root_system(&[t(Series::A, 2)], 0).unwrap();
        assert_eq!(brute_force_parabolic_count(&a2), Some(13));
        let a1 = build_root_system(&[t(Series::A, 1)], 0).unwrap();
        assert_eq!(brute_force_parabolic_count(&a1), Some(3));
    }

    #[test]
    fn sl_orders_agree() {
        for n in 2..=3 {
            for level in 2..=4u64 {
                if n == 3 && level == 4 {
                    continue;
                }
                assert_eq!(sl_order_by_rows(n, level), sl_order_full(n, level), "n={n} N={level}");
            }
        }
        assert_eq!(sl_order_full(2, 2), 6);
        assert_eq!(sl_order_by_rows(3, 2), 168);
    }

    #[test]
    fn discriminant_routes() {
        let g = RationalMatrix::diagonal(&[q(2), q(1), q(3)]);
        let direct = diagonal_discriminant(&[q(2), q(1), q(3)]);
        assert_eq!(complement_discriminant(&g), Some(direct));
    }
}
