//! Least-zero search checked against exhaustive box enumeration, plus the
//! dual-path (hash-split vs direct) agreement guarantees.

mod common;

use common::*;
use cubist::forms::{parse_form, CubicForm};
use cubist::hp;
use cubist::search::{find_least_zero, lambda_upper_profile, mitm_diagonal, Status, Strategy};
use rand::Rng;

fn norm_of(x: &[i64]) -> u32 {
    x.iter().map(|v| v.unsigned_abs() as u32).max().unwrap_or(0)
}

fn mixed_corpus(seed: u64, count: usize) -> Vec<CubicForm> {
    let mut r = rng(seed);
    let mut out = vec![
        parse_form("x1^3 + x2^3 - 2*x3^3").unwrap(),
        parse_form("x1^2*x2 - 3*x3^3").unwrap(),
        parse_form("x1^3 + 7*x2^3").unwrap(),
    ];
    while out.len() < count {
        let n = r.gen_range(2..=3);
        out.push(random_form(&mut r, n, 4, 4));
    }
    out
}

#[test]
fn found_outcomes_match_naive_enumeration() {
    const A: u32 = 5;
    for form in &mixed_corpus(301, 12) {
        let naive = naive_least_zero(form, A as i64);
        let mut strategies = vec![Strategy::Brute, Strategy::Auto];
        if form.diagonal_coeffs().is_some() {
            strategies.push(Strategy::Mitm);
        }
        for strat in strategies {
            let out = find_least_zero(form, A, strat, None).unwrap();
            match &naive {
                Some((lambda, zero_set)) => {
                    assert_eq!(out.status, Status::Found, "form {}", form.to_text());
                    assert_eq!(out.lambda, Some(*lambda));
                    assert_eq!(out.frontier, lambda - 1);
                    let w = out.witness.as_ref().expect("found implies witness");
                    assert!(w.verified);
                    assert_eq!(w.norm, *lambda);
                    assert_eq!(norm_of(&w.x), *lambda);
                    assert!(
                        zero_set.contains(&w.x),
                        "witness {:?} missing from the naive zero set of {}",
                        w.x,
                        form.to_text()
                    );
                }
                None => {
                    assert_eq!(out.status, Status::Exhausted, "form {}", form.to_text());
                    assert_eq!(out.lambda, None);
                    assert_eq!(out.witness, None);
                    assert_eq!(out.frontier, A);
                }
            }
        }
    }
}

#[test]
fn minimality_holds_under_independent_rescan() {
    for form in &mixed_corpus(302, 10) {
        let out = find_least_zero(form, 6, Strategy::Auto, None).unwrap();
        if let Some(lambda) = out.lambda {
            assert!(
                naive_zeros_in_box(form, lambda as i64 - 1).is_empty(),
                "a zero of smaller norm exists for {}",
                form.to_text()
            );
        }
    }
}

#[test]
fn mitm_and_brute_agree_on_random_diagonals() {
    const A: u32 = 8;
    let mut r = rng(303);
    let mut corpus = Vec::new();
    for n in 2..=4usize {
        for _ in 0..4 {
            corpus.push(random_diagonal(&mut r, n, 9));
        }
    }
    for form in &corpus {
        let brute = find_least_zero(form, A, Strategy::Brute, None).unwrap();
        let mitm = mitm_diagonal(form, A, None).unwrap();
        assert_eq!(brute.status, mitm.status, "form {}", form.to_text());
        assert_eq!(brute.lambda, mitm.lambda);
        assert_eq!(brute.witness, mitm.witness);
        assert_eq!(brute.frontier, mitm.frontier);
        if let (Some(lambda), Some(w)) = (brute.lambda, &brute.witness) {
            // Witness-set membership via the exhaustive enumeration, kept to
            // radii where the full box is small enough to list.
            if (form.n() < 4 && lambda <= 8) || lambda <= 4 {
                let zeros = naive_zeros_in_box(form, lambda as i64);
                assert!(zeros.contains(&w.x));
            }
        }
    }
}

#[test]
fn selmer_example_exhausts_both_paths_at_twenty() {
    let selmer = parse_form("3*x1^3 + 4*x2^3 + 5*x3^3").unwrap();
    let brute = find_least_zero(&selmer, 20, Strategy::Brute, None).unwrap();
    let mitm = mitm_diagonal(&selmer, 20, None).unwrap();
    for out in [&brute, &mitm] {
        assert_eq!(out.status, Status::Exhausted);
        assert_eq!(out.lambda, None);
        assert_eq!(out.frontier, 20);
    }
    assert_eq!(brute.points_examined, 41u64.pow(3) - 1);
}

#[test]
fn profile_completes_on_all_small_diagonal_forms() {
    // Every diagonal form in three variables with coefficients in
    // [−3,3]\{0}, profiled to radius 30 — no budget cut, no errors.
    let mut corpus = Vec::new();
    let vals = [-3i64, -2, -1, 1, 2, 3];
    for &a in &vals {
        for &b in &vals {
            for &c in &vals {
                let mono = [([0usize, 0, 0], a), ([1, 1, 1], b), ([2, 2, 2], c)];
                corpus.push(CubicForm::from_monomials(3, &mono).unwrap());
            }
        }
    }
    assert_eq!(corpus.len(), 216);
    let mut ctx = hp::Ctx::new(40);
    let rows = lambda_upper_profile(&corpus, 30, None, &mut ctx);
    assert_eq!(rows.len(), 216);
    for row in &rows {
        assert!(row.error.is_none(), "row {} errored", row.index);
        let out = row.outcome.as_ref().expect("profiled outcome");
        assert_ne!(out.status, Status::Budget, "row {} hit the budget", row.index);
        match out.status {
            Status::Found => {
                let lambda = out.lambda.unwrap();
                let w = out.witness.as_ref().unwrap();
                assert!(w.verified);
                assert_eq!(norm_of(&w.x), lambda);
                let want_ratio = lambda >= 2 && row.height.unwrap() >= 2;
                assert_eq!(row.log_ratio.is_some(), want_ratio, "row {}", row.index);
            }
            Status::Exhausted => {
                assert_eq!(out.frontier, 30);
                assert!(row.log_ratio.is_none());
            }
            Status::Budget => unreachable!(),
        }
    }

    // Λ is invariant under permuting the variables and under scaling the
    // form by a nonzero integer.
    let permuted: Vec<CubicForm> = corpus
        .iter()
        .map(|f| {
            let t = f.to_text();
            // x1 → x3 → x2 → x1 as a pure text rename.
            let t = t.replace("x1", "t1").replace("x2", "t2").replace("x3", "t3");
            let t = t.replace("t1", "x3").replace("t2", "x1").replace("t3", "x2");
            parse_form(&t).unwrap()
        })
        .collect();
    let scaled: Vec<CubicForm> = corpus
        .iter()
        .map(|f| {
            let mono: Vec<([usize; 3], i64)> =
                f.monomials().map(|(t, c)| (t, 7 * c)).collect();
            CubicForm::from_monomials(f.n(), &mono).unwrap()
        })
        .collect();
    let p_rows = lambda_upper_profile(&permuted, 30, None, &mut ctx);
    let s_rows = lambda_upper_profile(&scaled, 30, None, &mut ctx);
    for ((row, p), s) in rows.iter().zip(&p_rows).zip(&s_rows) {
        let lam = |r: &cubist::search::ProfileRow| r.outcome.as_ref().unwrap().lambda;
        assert_eq!(lam(row), lam(p), "permutation changed Λ at {}", row.index);
        assert_eq!(lam(row), lam(s), "scaling changed Λ at {}", row.index);
    }
}

#[test]
fn budget_cut_reports_partial_frontier_through_profile() {
    let corpus = vec![
        parse_form("3*x1^3 + 4*x2^3 + 5*x3^3").unwrap(),
        parse_form("x1^3 + x2^3 - 2*x3^3").unwrap(),
    ];
    let mut ctx = hp::Ctx::new(40);
    let rows = lambda_upper_profile(&corpus, 50, Some(200), &mut ctx);
    let selmer = rows[0].outcome.as_ref().unwrap();
    assert_eq!(selmer.status, Status::Budget);
    assert!(selmer.frontier < 50);
    assert!(selmer.points_examined <= 200);
    let easy = rows[1].outcome.as_ref().unwrap();
    assert_eq!(easy.status, Status::Found);
    assert_eq!(easy.lambda, Some(1));
}
