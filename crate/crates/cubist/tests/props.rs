//! Randomized properties: serialization round-trips, census partitions,
//! conjugate symmetry, multiplicativity, and scaling invariance.

use cubist::cli::{decimal_or_fraction, parse_rational, rational_string};
use cubist::expsums::{self, a_of_q, arith, complete_sum};
use cubist::forms::{parse_form, rank_census, CubicForm};
use cubist::hp;
use cubist::search::{find_least_zero, Strategy as SearchStrategy};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use std::collections::BTreeMap;

/// Random nonzero cubic form that genuinely uses its last variable, so the
/// ambient dimension survives a text round-trip.
fn arb_form(n_max: usize, bound: i64) -> BoxedStrategy<CubicForm> {
    (1..=n_max)
        .prop_flat_map(move |n| {
            proptest::collection::vec(
                ((0..n, 0..n, 0..n), -bound..=bound),
                1..=5,
            )
            .prop_map(move |raw| {
                let mut acc: BTreeMap<[usize; 3], i64> = BTreeMap::new();
                for ((i, j, k), c) in raw {
                    let mut t = [i, j, k];
                    t.sort_unstable();
                    *acc.entry(t).or_insert(0) += c;
                }
                acc.retain(|_, c| *c != 0);
                if !acc.keys().any(|t| t.contains(&(n - 1))) {
                    acc.insert([n - 1, n - 1, n - 1], 1);
                }
                let mono: Vec<([usize; 3], i64)> = acc.into_iter().collect();
                CubicForm::from_monomials(n, &mono).expect("nonzero by construction")
            })
        })
        .boxed()
}

fn arb_diagonal(n_max: usize, bound: i64) -> BoxedStrategy<CubicForm> {
    (2..=n_max)
        .prop_flat_map(move |n| {
            proptest::collection::vec((1..=bound).prop_flat_map(|m| prop_oneof![Just(m), Just(-m)]), n..=n)
                .prop_map(move |coeffs| {
                    let mono: Vec<([usize; 3], i64)> = coeffs
                        .iter()
                        .enumerate()
                        .map(|(i, &c)| ([i, i, i], c))
                        .collect();
                    CubicForm::from_monomials(n, &mono).unwrap()
                })
        })
        .boxed()
}

fn tol(ctx: &mut hp::Ctx, exp: u32) -> astro_float::BigFloat {
    ctx.rat(&BigRational::new(BigInt::one(), BigInt::from(10u32).pow(exp)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn text_round_trip(f in arb_form(4, 9)) {
        let text = f.to_text();
        let back = parse_form(&text).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn document_round_trip(f in arb_form(4, 9)) {
        let json = serde_json::to_string(&f.to_document()).unwrap();
        let back = parse_form(&json).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn rational_strings_round_trip(n in any::<i32>(), d in 1..=1_000_000u32) {
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        prop_assert_eq!(parse_rational(&rational_string(&r)).unwrap(), r.clone());
        prop_assert_eq!(parse_rational(&decimal_or_fraction(&r)).unwrap(), r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn census_partitions_the_box(f in arb_form(3, 5), h in 1..=3u32) {
        let census = rank_census(&f, h, None).unwrap();
        let total: u128 = census.counts.iter().sum();
        prop_assert_eq!(total, (2 * h as u128 + 1).pow(f.n() as u32));
        prop_assert_eq!(census.counts.len(), f.n() + 1);
    }

    #[test]
    fn ramanujan_sum_matches_direct_trig(q in 1..=24u64, m in 0..=24u64) {
        let exact = arith::ramanujan(q, m);
        let mut ctx = hp::Ctx::new(40);
        let mut re = ctx.int(0);
        let mut im = ctx.int(0);
        for a in 1..=q {
            if a.gcd(&q) != 1 {
                continue;
            }
            let t = BigRational::new(BigInt::from(a * m), BigInt::from(q));
            let (c, s) = ctx.cos_sin_2pi(&t);
            re = ctx.add(&re, &c);
            im = ctx.add(&im, &s);
        }
        let eps = tol(&mut ctx, 25);
        let want = ctx.big(&BigInt::from(exact));
        prop_assert!(ctx.sub(&re, &want).abs() < eps);
        prop_assert!(im.abs() < eps);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn complete_sum_conjugation(f in arb_form(2, 5), q in 3..=10u64, a_raw in 1..=9u64) {
        let a = 1 + a_raw % (q - 1);
        prop_assume!(a.gcd(&q) == 1);
        let mut ctx = hp::Ctx::new(40);
        let s1 = complete_sum(&f, a, q, None, &mut ctx).unwrap();
        let s2 = complete_sum(&f, q - a, q, None, &mut ctx).unwrap();
        let eps = tol(&mut ctx, 25);
        prop_assert!(ctx.sub(&s1.re, &s2.re).abs() < eps);
        let sum_im = ctx.add(&s1.im, &s2.im);
        prop_assert!(sum_im.abs() < eps);
    }

    #[test]
    fn a_of_q_multiplicative(
        f in arb_form(2, 5),
        pair in proptest::sample::select(vec![
            (2u64, 3u64), (2, 5), (3, 4), (3, 5), (4, 5), (5, 6),
            (2, 9), (4, 9), (8, 9), (9, 10), (5, 12), (7, 12),
        ]),
    ) {
        let (q1, q2) = pair;
        let lhs = a_of_q(&f, q1 * q2, None).unwrap();
        let rhs = a_of_q(&f, q1, None).unwrap() * a_of_q(&f, q2, None).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn least_zero_radius_is_scaling_invariant(f in arb_diagonal(3, 5), k in 1..=9i64) {
        let mono: Vec<([usize; 3], i64)> = f.monomials().map(|(t, c)| (t, k * c)).collect();
        let scaled = CubicForm::from_monomials(f.n(), &mono).unwrap();
        let a = find_least_zero(&f, 4, SearchStrategy::Auto, None).unwrap();
        let b = find_least_zero(&scaled, 4, SearchStrategy::Auto, None).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.lambda, b.lambda);
        prop_assert_eq!(a.witness, b.witness);
    }

    #[test]
    fn distribution_total_is_box_size(f in arb_form(3, 5), q in 1..=16u64) {
        let d = expsums::value_distribution(&f, q, None).unwrap();
        prop_assert_eq!(d.total(), num_bigint::BigUint::from(q).pow(f.n() as u32));
    }
}
