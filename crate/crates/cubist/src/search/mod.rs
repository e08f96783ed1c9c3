//! Exact least-zero search: the smallest sup-norm A such that C has a
//! nonzero integer zero with |x|_∞ = A, found by exhaustive shell
//! enumeration or, for diagonal forms, by a meet-in-the-middle split.
//!
//! Radii are searched in unit steps, so a `found` outcome is the exact value
//! Λ(C) and an `exhausted` outcome proves Λ(C) > A_max. Within a radius,
//! coordinates run in "spiral" order 0, 1, −1, 2, −2, …, and the reported
//! witness is the first zero in the induced lexicographic order — a
//! deterministic tie-break among equal-norm witnesses.

use std::collections::HashMap;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::CubicForm;
use crate::hp;

/// Default enumeration budget (number of vectors examined).
pub const DEFAULT_SEARCH_BUDGET: u128 = 100_000_000;

/// Search strategy selector. `Auto` uses meet-in-the-middle on diagonal
/// forms with at least two variables and shell enumeration otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Auto,
    Brute,
    Mitm,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "brute" => Ok(Strategy::Brute),
            "mitm" => Ok(Strategy::Mitm),
            other => Err(Error::Invalid(format!(
                "unknown strategy '{}', expected auto, brute, or mitm",
                other
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Found,
    Exhausted,
    Budget,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Found => "found",
            Status::Exhausted => "exhausted",
            Status::Budget => "budget",
        }
    }
}

/// A nonzero integer zero of the form, re-verified in exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroWitness {
    pub x: Vec<i64>,
    pub norm: u32,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub status: Status,
    /// Λ(C) when status is `Found`.
    pub lambda: Option<u32>,
    pub witness: Option<ZeroWitness>,
    /// Largest radius whose shell was fully exhausted without a zero.
    pub frontier: u32,
    /// Vectors examined: whole shells for brute force, both half-boxes per
    /// radius for meet-in-the-middle. Deterministic across thread counts.
    pub points_examined: u64,
}

/// Position of v in the coordinate order 0, 1, −1, 2, −2, …
fn spiral_key(v: i64) -> u64 {
    if v == 0 {
        0
    } else if v > 0 {
        (2 * v - 1) as u64
    } else {
        (-2 * v) as u64
    }
}

fn key_vec(x: &[i64]) -> Vec<u64> {
    x.iter().map(|&v| spiral_key(v)).collect()
}

fn is_zero_at(form: &CubicForm, x: &[i64]) -> bool {
    match form.eval_i128(x) {
        Some(v) => v == 0,
        None => {
            let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            form.eval_big(&big).expect("dimension fixed").is_zero()
        }
    }
}

/// (2a+1)^n − (2a−1)^n: the number of vectors with |x|_∞ = a.
fn shell_size(n: usize, a: u32) -> u128 {
    let outer = (2 * a as u128 + 1).checked_pow(n as u32).unwrap_or(u128::MAX);
    let inner = (2 * a as u128 - 1).checked_pow(n as u32).unwrap_or(u128::MAX);
    outer.saturating_sub(inner)
}

/// Half-box work for a meet-in-the-middle pass at radius a.
fn mitm_cost(n: usize, a: u32) -> u128 {
    let h = n.div_ceil(2);
    let side = 2 * a as u128 + 1;
    let first = side.checked_pow(h as u32).unwrap_or(u128::MAX);
    let second = side.checked_pow((n - h) as u32).unwrap_or(u128::MAX);
    first.saturating_add(second)
}

struct ShellScan<'a> {
    form: &'a CubicForm,
    a: i64,
}

impl ShellScan<'_> {
    /// First zero (in spiral-lex order) in the subtree below `depth`;
    /// `edge_seen` records whether some fixed coordinate already has |v| = a.
    fn descend(&self, x: &mut Vec<i64>, depth: usize, edge_seen: bool) -> Option<Vec<i64>> {
        let n = x.len();
        if depth == n {
            debug_assert!(edge_seen);
            if is_zero_at(self.form, x) {
                return Some(x.clone());
            }
            return None;
        }
        if depth == n - 1 && !edge_seen {
            // Only the extreme values keep the vector on the shell.
            for v in [self.a, -self.a] {
                x[depth] = v;
                if let Some(w) = self.descend(x, depth + 1, true) {
                    return Some(w);
                }
            }
            return None;
        }
        x[depth] = 0;
        if let Some(w) = self.descend(x, depth + 1, edge_seen) {
            return Some(w);
        }
        for m in 1..=self.a {
            for v in [m, -m] {
                x[depth] = v;
                if let Some(w) = self.descend(x, depth + 1, edge_seen || m == self.a) {
                    return Some(w);
                }
            }
        }
        None
    }
}

/// First zero on the shell |x|_∞ = a in spiral-lex order, or None.
/// Parallel over the leading coordinate; each branch is enumerated in full,
/// so the merge (minimal key vector) is deterministic.
fn shell_radius(form: &CubicForm, a: u32) -> Option<Vec<i64>> {
    let n = form.n();
    if n == 0 {
        return None;
    }
    let a = a as i64;
    let branches: Vec<i64> = if n == 1 {
        vec![a, -a]
    } else {
        let mut b = vec![0i64];
        for m in 1..=a {
            b.push(m);
            b.push(-m);
        }
        b
    };
    let scan = ShellScan { form, a };
    branches
        .into_par_iter()
        .filter_map(|v0| {
            let mut x = vec![0i64; n];
            x[0] = v0;
            let hit = if n == 1 {
                is_zero_at(form, &x).then(|| x.clone())
            } else {
                scan.descend(&mut x, 1, v0.unsigned_abs() as i64 == a)
            };
            hit.map(|x| (key_vec(&x), x))
        })
        .min_by(|p, q| p.0.cmp(&q.0))
        .map(|(_, x)| x)
}

/// Enumerate all vectors u with |u|_∞ ≤ a over the given diagonal
/// coefficients, in spiral-lex order, reporting (u, Σ c_i u_i³, |u|_∞).
fn each_half_vector(coeffs: &[i64], a: i64, f: &mut impl FnMut(&[i64], i128, i64)) {
    fn rec(
        coeffs: &[i64],
        a: i64,
        u: &mut Vec<i64>,
        depth: usize,
        sum: i128,
        norm: i64,
        f: &mut impl FnMut(&[i64], i128, i64),
    ) {
        if depth == coeffs.len() {
            f(u, sum, norm);
            return;
        }
        let c = coeffs[depth] as i128;
        let apply = |v: i64, rec_norm: i64, u: &mut Vec<i64>, f: &mut _| {
            u[depth] = v;
            let cube = (v as i128).pow(3);
            rec(coeffs, a, u, depth + 1, sum + c * cube, rec_norm, f);
        };
        apply(0, norm, u, f);
        for m in 1..=a {
            let nn = norm.max(m);
            apply(m, nn, u, f);
            apply(-m, nn, u, f);
        }
    }
    let mut u = vec![0i64; coeffs.len()];
    rec(coeffs, a, &mut u, 0, 0, 0, f);
}

struct HalfEntry {
    /// First (minimal spiral-lex) u with this partial sum.
    any: Vec<i64>,
    /// First such u with |u|_∞ exactly a, if any.
    exact: Option<Vec<i64>>,
}

/// Minimal witness with |x|_∞ = a for a diagonal form, by tabulating the
/// first ⌈n/2⌉ coordinates and scanning the rest for negated partial sums.
fn mitm_radius(diag: &[i64], a: u32) -> Option<Vec<i64>> {
    let n = diag.len();
    let h = n.div_ceil(2);
    let a = a as i64;
    let mut table: HashMap<i128, HalfEntry> = HashMap::new();
    each_half_vector(&diag[..h], a, &mut |u, sum, norm| {
        let entry = table.entry(sum).or_insert_with(|| HalfEntry {
            any: u.to_vec(),
            exact: None,
        });
        if entry.exact.is_none() && norm == a {
            entry.exact = Some(u.to_vec());
        }
    });
    let mut best: Option<(Vec<u64>, Vec<i64>)> = None;
    each_half_vector(&diag[h..], a, &mut |w, sum, norm| {
        let Some(entry) = table.get(&-sum) else { return };
        let u = if norm == a {
            Some(&entry.any)
        } else {
            entry.exact.as_ref()
        };
        let Some(u) = u else { return };
        let mut x = Vec::with_capacity(n);
        x.extend_from_slice(u);
        x.extend_from_slice(w);
        let key = key_vec(&x);
        let replace = match &best {
            Some((bk, _)) => key < *bk,
            None => true,
        };
        if replace {
            best = Some((key, x));
        }
    });
    best.map(|(_, x)| x)
}

/// Least nonzero integer zero of C with |x|_∞ ≤ a_max, searching radii in
/// increasing order. `Budget` outcomes report the largest fully exhausted
/// radius as the frontier.
pub fn find_least_zero(
    form: &CubicForm,
    a_max: u32,
    strategy: Strategy,
    budget: Option<u128>,
) -> Result<SearchOutcome> {
    if a_max == 0 {
        return Err(Error::Interval {
            what: "A_max",
            value: "0".into(),
            interval: "[1, inf)".into(),
        });
    }
    let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
    let n = form.n();
    let diag = form.diagonal_coeffs();
    let use_mitm = match strategy {
        Strategy::Brute => false,
        Strategy::Mitm => {
            if diag.is_none() {
                return Err(Error::Strategy(
                    "meet-in-the-middle requires a diagonal form".into(),
                ));
            }
            true
        }
        Strategy::Auto => diag.is_some() && n >= 2,
    };
    let mut points: u64 = 0;
    let mut spent: u128 = 0;
    for a in 1..=a_max {
        let cost = if use_mitm {
            mitm_cost(n, a)
        } else {
            shell_size(n, a)
        };
        if spent.saturating_add(cost) > budget {
            return Ok(SearchOutcome {
                status: Status::Budget,
                lambda: None,
                witness: None,
                frontier: a - 1,
                points_examined: points,
            });
        }
        spent += cost;
        points = points.saturating_add(u64::try_from(cost).unwrap_or(u64::MAX));
        let hit = if use_mitm {
            mitm_radius(diag.as_ref().expect("diagonal checked"), a)
        } else {
            shell_radius(form, a)
        };
        if let Some(x) = hit {
            let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            let verified = form
                .eval_big(&big)
                .map(|v| v.is_zero())
                .unwrap_or(false);
            let norm = x.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0) as u32;
            return Ok(SearchOutcome {
                status: Status::Found,
                lambda: Some(a),
                witness: Some(ZeroWitness { x, norm, verified }),
                frontier: a - 1,
                points_examined: points,
            });
        }
    }
    Ok(SearchOutcome {
        status: Status::Exhausted,
        lambda: None,
        witness: None,
        frontier: a_max,
        points_examined: points,
    })
}

/// Meet-in-the-middle search as a standalone entry point; rejects
/// non-diagonal forms.
pub fn mitm_diagonal(form: &CubicForm, a_max: u32, budget: Option<u128>) -> Result<SearchOutcome> {
    find_least_zero(form, a_max, Strategy::Mitm, budget)
}

/// One corpus entry of a least-zero profile.
#[derive(Clone, Debug)]
pub struct ProfileRow {
    pub index: usize,
    pub form_text: String,
    pub height: Option<u64>,
    pub outcome: Option<SearchOutcome>,
    /// log Λ / log M, evaluated when both Λ ≥ 2 and M ≥ 2.
    pub log_ratio: Option<BigFloat>,
    pub error: Option<String>,
}

/// Run the least-zero search over a corpus, marking per-form failures
/// (degenerate forms, for instance) without aborting the run.
pub fn lambda_upper_profile(
    corpus: &[CubicForm],
    a_max: u32,
    budget: Option<u128>,
    ctx: &mut hp::Ctx,
) -> Vec<ProfileRow> {
    corpus
        .iter()
        .enumerate()
        .map(|(index, form)| {
            let form_text = form.to_text();
            let height = match form.height() {
                Ok(h) => h,
                Err(e) => {
                    return ProfileRow {
                        index,
                        form_text,
                        height: None,
                        outcome: None,
                        log_ratio: None,
                        error: Some(e.to_string()),
                    }
                }
            };
            match find_least_zero(form, a_max, Strategy::Auto, budget) {
                Ok(outcome) => {
                    let log_ratio = match (outcome.lambda, height) {
                        (Some(lambda), m) if lambda >= 2 && m >= 2 => {
                            let ll_arg = ctx.int(lambda as i64);
                            let ll = ctx.ln(&ll_arg);
                            let lm_arg = ctx.big(&BigInt::from(m));
                            let lm = ctx.ln(&lm_arg);
                            Some(ctx.div(&ll, &lm))
                        }
                        _ => None,
                    };
                    ProfileRow {
                        index,
                        form_text,
                        height: Some(height),
                        outcome: Some(outcome),
                        log_ratio,
                        error: None,
                    }
                }
                Err(e) => ProfileRow {
                    index,
                    form_text,
                    height: Some(height),
                    outcome: None,
                    log_ratio: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect()
}
