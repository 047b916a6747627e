use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;

use tracegeo::arithmetic::{factorize, sl_index};
use tracegeo::budget::{beta_max, exponents, lambda_min, BudgetParams};
use tracegeo::exact::{format_rational, parse_rational, q_frac, Q};
use tracegeo::group_spec::{parse_group_spec, render_group_spec};
use tracegeo::local_data::{weyl_discriminant, RationalMatrix};
use tracegeo::mellin::{exp_preset, fp_mellin};
use tracegeo::orbits::{list_orbits, orbit_dim, partitions, transpose_partition, OrbitType};
use tracegeo::oracle::diagonal_discriminant;
use tracegeo::parabolic::{contributing_tuple_count, enumerate_parabolic_subsets, is_closed, levi_of};
use tracegeo::root_datum::{build_root_system, Series, SimpleType};

fn simple_type() -> impl Strategy<Value = SimpleType> {
    prop_oneof![
        (1usize..6).prop_map(|l| SimpleType::new(Series::A, l).unwrap()),
        (1usize..5).prop_map(|l| SimpleType::new(Series::B, l).unwrap()),
        (1usize..5).prop_map(|l| SimpleType::new(Series::C, l).unwrap()),
        (2usize..6).prop_map(|l| SimpleType::new(Series::D, l).unwrap()),
        (6usize..9).prop_map(|l| SimpleType::new(Series::E, l).unwrap()),
        Just(SimpleType::new(Series::F, 4).unwrap()),
        Just(SimpleType::new(Series::G, 2).unwrap()),
    ]
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    (prop_oneof![-7i64..=-1, 1i64..=7], 1i64..=6).prop_map(|(n, d)| q_frac(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_spec_round_trips(
        factors in prop::collection::vec(simple_type(), 1..4),
        torus in 0usize..3,
        degree in 1u32..5,
    ) {
        let mut text = factors.iter().map(ToString::to_string).collect::<Vec<_>>().join("x");
        if torus > 0 {
            text += &format!("+T{torus}");
        }
        if degree > 1 {
            text += &format!("@res={degree}");
        }
        let g = parse_group_spec(&text).unwrap();
        prop_assert_eq!(render_group_spec(&g), text.clone());
        prop_assert_eq!(g.factors, factors);
        prop_assert_eq!(g.torus_rank, torus);
        prop_assert_eq!(g.restriction_degree, degree);
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = q_frac(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&x)).unwrap(), x);
    }

    #[test]
    fn transpose_is_an_involution(n in 1usize..14, pick in any::<prop::sample::Index>()) {
        let ps = partitions(n);
        let p = &ps[pick.index(ps.len())];
        prop_assert_eq!(transpose_partition(&transpose_partition(p)), p.clone());
        prop_assert_eq!(transpose_partition(p).iter().sum::<usize>(), n);
    }

    #[test]
    fn orbit_dimensions_are_even_and_bounded(t in simple_type()) {
        prop_assume!(!matches!(t.series(), Series::E | Series::F | Series::G));
        let labels = list_orbits(OrbitType::Simple(t)).unwrap();
        let top = OrbitType::Simple(t).lie_algebra_dim() - t.rank();
        for l in &labels {
            let d = orbit_dim(l);
            prop_assert!(d.is_multiple_of(2) && d <= top, "{} has dim {}", l, d);
        }
        prop_assert!(labels.iter().any(|l| orbit_dim(l) == top));
        prop_assert!(labels.iter().any(|l| orbit_dim(l) == 0));
    }

    #[test]
    fn parabolics_are_closed_and_opposites_too(t in prop_oneof![
        (1usize..4).prop_map(|l| SimpleType::new(Series::A, l).unwrap()),
        Just(SimpleType::new(Series::B, 2).unwrap()),
        Just(SimpleType::new(Series::G, 2).unwrap()),
        Just(SimpleType::new(Series::C, 3).unwrap()),
    ], torus in 0usize..2) {
        let rs = build_root_system(&[t], torus).unwrap();
        let all = enumerate_parabolic_subsets(&rs).unwrap();
        for p in &all {
            prop_assert!(is_closed(&rs, p.members()));
            prop_assert!(all.contains(&p.opposite(&rs)));
            let l = levi_of(&rs, p);
            prop_assert_eq!(levi_of(&rs, &p.opposite(&rs)), l.clone());
            prop_assert!(l.a_m_dim() >= torus);
        }
    }

    #[test]
    fn sl_index_is_multiplicative(n in 2u32..6, a in 1u64..2000, b in 1u64..2000) {
        prop_assume!(a.gcd(&b) == 1);
        let lhs = sl_index(n, a * b).unwrap().value;
        let rhs = sl_index(n, a).unwrap().value * sl_index(n, b).unwrap().value;
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sl_index_matches_prime_power_formula(n in 2u32..5, p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), e in 1u32..4) {
        let level = p.pow(e);
        let mut order = BigUint::from(p).pow((e - 1) * (n * n - 1));
        order *= BigUint::from(p).pow(n * n - 1);
        for k in 2..=n {
            order = order * (BigUint::from(p).pow(k) - 1u32) / BigUint::from(p).pow(k);
        }
        prop_assert_eq!(sl_index(n, level).unwrap().value, order);
    }

    #[test]
    fn factorization_multiplies_back(n in 1u64..10_000_000) {
        let f = factorize(n);
        let prod: u64 = f.iter().map(|(p, e)| p.pow(*e)).product();
        prop_assert_eq!(prod, n);
    }

    #[test]
    fn discriminant_of_diagonal_matches_product(diag in prop::collection::vec(nonzero_rational(), 1..5)) {
        let d = weyl_discriminant(&RationalMatrix::diagonal(&diag)).unwrap();
        prop_assert_eq!(d.value, diagonal_discriminant(&diag));
    }

    #[test]
    fn discriminant_is_conjugation_invariant(a in nonzero_rational(), b in nonzero_rational(), s in -5i64..5) {
        let d0 = weyl_discriminant(&RationalMatrix::diagonal(&[a.clone(), b.clone()])).unwrap().value;
        // [[1, s], [0, 1]] diag(a, b) [[1, -s], [0, 1]]
        let off = (b.clone() - a.clone()) * Q::from_integer(s.into());
        let g = RationalMatrix::new(vec![vec![a, off], vec![Q::from_integer(0.into()), b]]).unwrap();
        prop_assert_eq!(weyl_discriminant(&g).unwrap().value, d0);
    }

    #[test]
    fn finite_part_is_independent_of_split_point(
        lambda in 0.2f64..4.0,
        power in prop::sample::select(vec![(0i64, 1i64), (-1, 2), (-3, 2), (1, 3), (-2, 3), (2, 1)]),
        t0 in 0.2f64..3.0,
    ) {
        let (f, e) = exp_preset(lambda, q_frac(power.0, power.1), 16).unwrap();
        let base = fp_mellin(&f, &e).unwrap();
        let moved = fp_mellin(&f, &e.with_t0(t0).unwrap()).unwrap();
        prop_assert!((base - moved).abs() < 1e-7 * (1.0 + base.abs()), "{} vs {}", base, moved);
    }

    #[test]
    fn finite_part_of_exponential(lambda in 0.05f64..20.0) {
        let (f, e) = exp_preset(lambda, Q::from_integer(0.into()), 14).unwrap();
        prop_assert!((fp_mellin(&f, &e).unwrap() + lambda.ln()).abs() < 1e-8);
    }

    #[test]
    fn feasible_budgets_meet_every_exponent(
        k in 0.0f64..15.0,
        c in (0.01f64..30.0, 0.01f64..30.0, 0.01f64..30.0),
        eps in 0.0f64..0.95,
        cprime in 0.0f64..20.0,
        shrink in 0.01f64..=1.0,
    ) {
        let beta = beta_max(c.0, c.1, c.2, k).unwrap() * shrink;
        let lambda = lambda_min(k, beta, eps, cprime).unwrap();
        let p = BudgetParams { beta, lambda, ..BudgetParams::feasible(k, c.0, c.1, c.2, eps, cprime).unwrap() };
        let x = exponents(&p).unwrap();
        prop_assert!(x.all_ok, "{:?}", x);
        prop_assert!(x.e1 <= -k + 1e-9 * k.max(1.0));
    }

    #[test]
    fn tuple_count_matches_enumeration(s in 1usize..6, d in 0usize..4, num in 1usize..6) {
        let mut count = 0u128;
        for mut code in 0..num.pow(s as u32) {
            let mut off = 0;
            for _ in 0..s {
                off += usize::from(code % num != 0);
                code /= num;
            }
            count += u128::from(off <= d);
        }
        prop_assert_eq!(contributing_tuple_count(s, d, num as u128).unwrap(), count);
    }
}
