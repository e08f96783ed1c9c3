//! Exact exponential-sum arithmetic for cubic forms.
//!
//! Everything that feeds an identity is exact: value distributions of C mod q
//! are integer histograms, A(q) is assembled from Ramanujan sums as a
//! rational number, local counts ρ(p^k) are integers, and the truncated
//! singular series is an exact rational partial sum. Floating point enters
//! only when a complex value S(a,q) or S(α) is rendered, through [`hp::Ctx`]
//! at configurable precision.

pub mod arith;

use std::collections::{BTreeMap, BTreeSet};

use astro_float::BigFloat;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forms::CubicForm;
use crate::hp;

/// Default residue/lattice-point budget for enumerations in this module.
pub const DEFAULT_RESIDUE_BUDGET: u128 = 10_000_000;

fn budget_or(budget: Option<u128>) -> u128 {
    budget.unwrap_or(DEFAULT_RESIDUE_BUDGET)
}

/// Exact histogram of C over (Z/qZ)ⁿ: counts[m] = #{r : C(r) ≡ m (mod q)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValueDistribution {
    pub q: u64,
    pub counts: Vec<BigUint>,
}

impl ValueDistribution {
    /// Σ_m counts[m], which always equals qⁿ.
    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// ρ(q) = counts[0], the number of zeros of C mod q.
    pub fn rho(&self) -> BigUint {
        self.counts[0].clone()
    }
}

/// Exact value distribution of C mod q. Diagonal forms take a fast path
/// (per-variable cube histograms composed by cyclic convolution, n·q² work);
/// everything else enumerates the qⁿ residue vectors, parallelized over the
/// first coordinate with commutative integer merges.
pub fn value_distribution(
    form: &CubicForm,
    q: u64,
    budget: Option<u128>,
) -> Result<ValueDistribution> {
    if q == 0 {
        return Err(Error::Interval {
            what: "q",
            value: "0".into(),
            interval: "[1, inf)".into(),
        });
    }
    let budget = budget_or(budget);
    let n = form.n();
    if n == 0 {
        let required = q as u128;
        if required > budget {
            return Err(Error::Budget { required, budget });
        }
        let mut counts = vec![BigUint::zero(); q as usize];
        counts[0] = BigUint::one();
        return Ok(ValueDistribution { q, counts });
    }
    if let Some(diag) = form.diagonal_coeffs() {
        let required = (n as u128)
            .saturating_mul(q as u128)
            .saturating_mul(q as u128);
        if required > budget {
            return Err(Error::Budget { required, budget });
        }
        return Ok(distribution_diagonal(&diag, q));
    }
    let required = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    Ok(distribution_brute(form, q))
}

fn distribution_diagonal(diag: &[i64], q: u64) -> ValueDistribution {
    let qu = q as usize;
    let q128 = q as u128;
    // Start from the distribution of the empty sum: a point mass at 0.
    let mut counts = vec![BigUint::zero(); qu];
    counts[0] = BigUint::one();
    for &a in diag {
        let am = (a as i128).rem_euclid(q as i128) as u128;
        let mut dist = vec![0u64; qu];
        for x in 0..q128 {
            let x3 = ((x * x) % q128) * x % q128;
            dist[((am * x3) % q128) as usize] += 1;
        }
        let mut next = vec![BigUint::zero(); qu];
        for (j, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, &d) in dist.iter().enumerate() {
                if d == 0 {
                    continue;
                }
                next[(j + k) % qu] += c * d;
            }
        }
        counts = next;
    }
    ValueDistribution { q, counts }
}

/// Coefficient tables of C viewed as a cubic in its last variable:
/// C(r, x) = c3·x³ + c2(r)·x² + c1(r)·x + c0(r), everything reduced mod q.
struct LastVarDecomp {
    q: u128,
    c3: u128,
    /// (i, coefficient) for monomials x_i·x_last².
    quad: Vec<(usize, u128)>,
    /// (i, j, coefficient) for monomials x_i·x_j·x_last with i ≤ j.
    lin: Vec<(usize, usize, u128)>,
    /// Monomials not involving the last variable.
    rest: Vec<([usize; 3], u128)>,
}

impl LastVarDecomp {
    fn new(form: &CubicForm, q: u64) -> Self {
        let last = form.n() - 1;
        let q128 = q as u128;
        let red = |c: i64| (c as i128).rem_euclid(q as i128) as u128;
        let mut c3 = 0u128;
        let mut quad = Vec::new();
        let mut lin = Vec::new();
        let mut rest = Vec::new();
        for (t, a) in form.monomials() {
            let a = red(a);
            if a == 0 {
                continue;
            }
            match t.iter().filter(|&&i| i == last).count() {
                3 => c3 = a,
                2 => quad.push((t[0], a)),
                1 => lin.push((t[0], t[1], a)),
                _ => rest.push((t, a)),
            }
        }
        LastVarDecomp { q: q128, c3, quad, lin, rest }
    }

    /// Run the last coordinate over [0, q) for a fixed prefix, tallying C.
    fn tally_last(&self, prefix: &[u128], counts: &mut [u64]) {
        let q = self.q;
        let mut c2 = 0u128;
        for &(i, a) in &self.quad {
            c2 = (c2 + a * prefix[i]) % q;
        }
        let mut c1 = 0u128;
        for &(i, j, a) in &self.lin {
            c1 = (c1 + a * (prefix[i] * prefix[j] % q)) % q;
        }
        let mut c0 = 0u128;
        for &(t, a) in &self.rest {
            let p = prefix[t[0]] * prefix[t[1]] % q * prefix[t[2]] % q;
            c0 = (c0 + a * p) % q;
        }
        for x in 0..q {
            let v = ((self.c3 * x + c2) % q * x + c1) % q * x % q + c0;
            counts[(v % q) as usize] += 1;
        }
    }

    fn walk(&self, prefix: &mut [u128], depth: usize, counts: &mut [u64]) {
        if depth == prefix.len() {
            self.tally_last(prefix, counts);
            return;
        }
        for v in 0..self.q {
            prefix[depth] = v;
            self.walk(prefix, depth + 1, counts);
        }
    }
}

fn distribution_brute(form: &CubicForm, q: u64) -> ValueDistribution {
    let n = form.n();
    let qu = q as usize;
    let decomp = LastVarDecomp::new(form, q);
    let counts: Vec<u128> = if n == 1 {
        let mut counts = vec![0u64; qu];
        decomp.tally_last(&[], &mut counts);
        counts.into_iter().map(u128::from).collect()
    } else {
        (0..q)
            .into_par_iter()
            .map(|r0| {
                let mut counts = vec![0u64; qu];
                let mut prefix = vec![0u128; n - 1];
                prefix[0] = r0 as u128;
                decomp.walk(&mut prefix, 1, &mut counts);
                counts.into_iter().map(u128::from).collect::<Vec<u128>>()
            })
            .reduce(
                || vec![0u128; qu],
                |mut a, b| {
                    for (ai, bi) in a.iter_mut().zip(b) {
                        *ai += bi;
                    }
                    a
                },
            )
    };
    ValueDistribution {
        q,
        counts: counts.into_iter().map(BigUint::from).collect(),
    }
}

/// A complete sum S(a,q) = Σ_{r mod q} e^{2πi·aC(r)/q} with its exact
/// residue histogram and its complex value at the context precision.
#[derive(Clone, Debug)]
pub struct ExpSumRecord {
    pub a: u64,
    pub q: u64,
    pub exact_counts: ValueDistribution,
    pub re: BigFloat,
    pub im: BigFloat,
    pub abs: BigFloat,
}

/// S(a,q) for gcd(a,q) = 1 (a = 0 is allowed only when q = 1).
pub fn complete_sum(
    form: &CubicForm,
    a: u64,
    q: u64,
    budget: Option<u128>,
    ctx: &mut hp::Ctx,
) -> Result<ExpSumRecord> {
    let dist = value_distribution(form, q, budget)?;
    sum_from_distribution(&dist, a, ctx)
}

/// S(a,q) from a precomputed distribution (lets callers amortize the
/// enumeration over many a). Summation runs in ascending residue order so
/// the floating output is reproducible.
pub fn sum_from_distribution(
    dist: &ValueDistribution,
    a: u64,
    ctx: &mut hp::Ctx,
) -> Result<ExpSumRecord> {
    let q = dist.q;
    let a = a % q;
    if a.gcd(&q) != 1 {
        return Err(Error::NonCoprime { a, q });
    }
    let mut re = ctx.int(0);
    let mut im = ctx.int(0);
    for (m, c) in dist.counts.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let frac = BigRational::new(
            BigInt::from(a) * BigInt::from(m as u64),
            BigInt::from(q),
        );
        let (cv, sv) = ctx.cos_sin_2pi(&frac);
        let w = ctx.big(&BigInt::from(c.clone()));
        let tc = ctx.mul(&w, &cv);
        let ts = ctx.mul(&w, &sv);
        re = ctx.add(&re, &tc);
        im = ctx.add(&im, &ts);
    }
    let abs = ctx.abs_complex(&re, &im);
    Ok(ExpSumRecord {
        a,
        q,
        exact_counts: dist.clone(),
        re,
        im,
        abs,
    })
}

/// Σ_{a=0}^{q−1} S(a,q) = q·ρ(q), computed exactly from the histogram: the
/// inner sum over a kills every nonzero residue class.
pub fn raw_sum_over_a(form: &CubicForm, q: u64, budget: Option<u128>) -> Result<BigInt> {
    let dist = value_distribution(form, q, budget)?;
    Ok(BigInt::from(q) * BigInt::from(dist.rho()))
}

/// A(q) = q^{−n} Σ_{gcd(a,q)=1} S(a,q) as an exact rational, evaluated
/// without floats: Σ_a e^{2πi·am/q} over units is the Ramanujan sum c_q(m),
/// so A(q) = q^{−n} Σ_m counts[m]·c_q(m).
pub fn a_of_q(form: &CubicForm, q: u64, budget: Option<u128>) -> Result<BigRational> {
    let dist = value_distribution(form, q, budget)?;
    Ok(a_of_q_from(&dist, form.n()))
}

/// A(q) from a precomputed distribution.
pub fn a_of_q_from(dist: &ValueDistribution, n: usize) -> BigRational {
    let q = dist.q;
    let table = arith::ramanujan_table(q);
    let mut num = BigInt::zero();
    for (m, c) in dist.counts.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let m = m as u64;
        let g = if m == 0 { q } else { m.gcd(&q) };
        num += BigInt::from(c.clone()) * BigInt::from(table[&g]);
    }
    BigRational::new(num, BigInt::from(q).pow(n as u32))
}

/// p^±exp as an exact rational.
fn prime_power_ratio(p: u64, exp: i64) -> BigRational {
    let mag = BigInt::from(p).pow(exp.unsigned_abs() as u32);
    if exp >= 0 {
        BigRational::from_integer(mag)
    } else {
        BigRational::new(BigInt::one(), mag)
    }
}

/// ρ(p^k): number of zeros of C in (Z/p^k)ⁿ.
pub fn local_count(form: &CubicForm, p: u64, k: u32, budget: Option<u128>) -> Result<BigUint> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime { p });
    }
    if k == 0 {
        return Err(Error::Interval {
            what: "k",
            value: "0".into(),
            interval: "[1, inf)".into(),
        });
    }
    let q = checked_prime_power(p, k, budget_or(budget))?;
    Ok(value_distribution(form, q, budget)?.rho())
}

fn checked_prime_power(p: u64, k: u32, budget: u128) -> Result<u64> {
    let mut q: u128 = 1;
    for _ in 0..k {
        q = q.saturating_mul(p as u128);
    }
    if q > u64::MAX as u128 {
        return Err(Error::Budget { required: u128::MAX, budget });
    }
    Ok(q as u64)
}

/// Both sides of the exact local identity Σ_{i=0}^{k} A(p^i) =
/// ρ(p^k)/p^{k(n−1)}, as rationals, plus the equality verdict. k = 0 is the
/// trivial edge A(1) = 1 = ρ(1).
pub fn local_density_identity(
    form: &CubicForm,
    p: u64,
    k: u32,
    budget: Option<u128>,
) -> Result<(BigRational, BigRational, bool)> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime { p });
    }
    let mut lhs = BigRational::zero();
    let mut q: u64 = 1;
    for i in 0..=k {
        if i > 0 {
            q = checked_prime_power(p, i, budget_or(budget))?;
        }
        lhs += a_of_q(form, q, budget)?;
    }
    let rho = BigInt::from(value_distribution(form, q, budget)?.rho());
    let exp = k as i64 * (form.n() as i64 - 1);
    let rhs = BigRational::from_integer(rho) * prime_power_ratio(p, -exp);
    let equal = lhs == rhs;
    Ok((lhs, rhs, equal))
}

/// One modulus row of a truncated singular series.
#[derive(Clone, Debug)]
pub struct SeriesRow {
    pub q: u64,
    pub a_q: BigRational,
    /// Σ_{q' ≤ q} A(q'), exact.
    pub cumulative: BigRational,
}

/// Largest prime-power density ρ(p^k)/p^{k(n−1)} observable below the
/// truncation bound.
#[derive(Clone, Debug)]
pub struct LocalDensityRow {
    pub p: u64,
    pub k_max: u32,
    pub density: BigRational,
}

/// Exact truncated singular series Σ_{q ≤ R} A(q) with per-q rows,
/// positivity flag, per-prime local densities, and an internal
/// multiplicativity cross-check A(q) = Π A(p^e) for every composite q.
#[derive(Clone, Debug)]
pub struct SeriesReport {
    pub requested_r: u64,
    /// Largest modulus actually summed (smaller than requested only when the
    /// budget cut the enumeration short).
    pub r: u64,
    pub rows: Vec<SeriesRow>,
    pub partial_sum: BigRational,
    pub positive: bool,
    pub local_densities: Vec<LocalDensityRow>,
    pub multiplicative_ok: bool,
}

pub fn singular_series(form: &CubicForm, r: u64, budget: Option<u128>) -> Result<SeriesReport> {
    if r == 0 {
        return Err(Error::Interval {
            what: "R",
            value: "0".into(),
            interval: "[1, inf)".into(),
        });
    }
    let mut rows = Vec::new();
    let mut sum = BigRational::zero();
    let mut values: BTreeMap<u64, BigRational> = BTreeMap::new();
    let mut achieved = 0u64;
    for q in 1..=r {
        match a_of_q(form, q, budget) {
            Ok(a) => {
                sum += &a;
                values.insert(q, a.clone());
                rows.push(SeriesRow { q, a_q: a, cumulative: sum.clone() });
                achieved = q;
            }
            // Report the largest feasible truncation instead of failing.
            Err(Error::Budget { .. }) if q > 1 => break,
            Err(e) => return Err(e),
        }
    }
    let mut multiplicative_ok = true;
    for q in 2..=achieved {
        let factors = arith::factorize(q);
        if factors.len() < 2 {
            continue;
        }
        let mut prod = BigRational::one();
        for &(p, e) in &factors {
            prod *= &values[&p.pow(e)];
        }
        if prod != values[&q] {
            multiplicative_ok = false;
        }
    }
    let mut local_densities = Vec::new();
    for p in 2..=achieved {
        if !arith::is_prime(p) {
            continue;
        }
        let mut k_max = 1u32;
        loop {
            match p.checked_pow(k_max + 1) {
                Some(next) if next <= achieved => k_max += 1,
                _ => break,
            }
        }
        let q = p.pow(k_max);
        let rho = BigInt::from(value_distribution(form, q, budget)?.rho());
        let exp = k_max as i64 * (form.n() as i64 - 1);
        let density = BigRational::from_integer(rho) * prime_power_ratio(p, -exp);
        local_densities.push(LocalDensityRow { p, k_max, density });
    }
    let positive = sum > BigRational::zero();
    Ok(SeriesReport {
        requested_r: r,
        r: achieved,
        rows,
        partial_sum: sum,
        positive,
        local_densities,
        multiplicative_ok,
    })
}

/// One factor χ_p = ρ(p^{k(p)})/p^{k(p)(n−1)} of a truncated Euler product.
#[derive(Clone, Debug)]
pub struct EulerFactor {
    pub p: u64,
    pub k: u32,
    pub chi: BigRational,
}

#[derive(Clone, Debug)]
pub struct EulerProduct {
    pub p_max: u64,
    pub factors: Vec<EulerFactor>,
    pub product: BigRational,
}

/// Π_{p ≤ p_max} ρ(p^{k(p)})/p^{k(p)(n−1)} for a caller-supplied cutoff
/// k(p). The depth at which the local density stabilizes is context
/// dependent, so the cutoff is a parameter; see [`default_cutoff_k`].
pub fn truncated_euler_product(
    form: &CubicForm,
    p_max: u64,
    cutoff: &dyn Fn(u64) -> u32,
    budget: Option<u128>,
) -> Result<EulerProduct> {
    let mut factors = Vec::new();
    let mut product = BigRational::one();
    for p in 2..=p_max {
        if !arith::is_prime(p) {
            continue;
        }
        let k = cutoff(p).max(1);
        let rho = BigInt::from(local_count(form, p, k, budget)?);
        let exp = k as i64 * (form.n() as i64 - 1);
        let chi = BigRational::from_integer(rho) * prime_power_ratio(p, -exp);
        product *= &chi;
        factors.push(EulerFactor { p, k, chi });
    }
    Ok(EulerProduct { p_max, factors, product })
}

/// Default Euler-product cutoff: the smallest k ≥ 1 with p^k > p·M². This is
/// a placeholder heuristic, not a canonical choice — callers reproducing a
/// specific construction should pass their own cutoff.
pub fn default_cutoff_k(p: u64, m: u64) -> u32 {
    let target = (p as u128) * (m as u128) * (m as u128);
    let mut k = 1u32;
    let mut pw = p as u128;
    while pw <= target {
        k += 1;
        pw = pw.saturating_mul(p as u128);
    }
    k
}

/// A scaled box P·𝓑(z, ρ): the lattice points x with
/// P(z_i − ρ) ≤ x_i ≤ P(z_i + ρ) per coordinate.
#[derive(Clone, Debug)]
pub struct BoxSpec {
    z: Vec<BigRational>,
    rho: BigRational,
    scale: BigRational,
}

impl BoxSpec {
    /// Requires ρ > 0 and P ≥ 1.
    pub fn new(z: Vec<BigRational>, rho: BigRational, scale: BigRational) -> Result<BoxSpec> {
        if rho <= BigRational::zero() {
            return Err(Error::Interval {
                what: "rho",
                value: rho.to_string(),
                interval: "(0, inf)".into(),
            });
        }
        if scale < BigRational::one() {
            return Err(Error::Interval {
                what: "P",
                value: scale.to_string(),
                interval: "[1, inf)".into(),
            });
        }
        Ok(BoxSpec { z, rho, scale })
    }

    pub fn dim(&self) -> usize {
        self.z.len()
    }

    pub fn center(&self) -> &[BigRational] {
        &self.z
    }

    pub fn rho(&self) -> &BigRational {
        &self.rho
    }

    pub fn scale(&self) -> &BigRational {
        &self.scale
    }

    /// Inclusive lattice bounds [⌈P(z_i−ρ)⌉, ⌊P(z_i+ρ)⌋] per coordinate
    /// (empty when the lower bound exceeds the upper one).
    pub fn lattice_ranges(&self) -> Vec<(BigInt, BigInt)> {
        self.z
            .iter()
            .map(|zi| {
                let lo = ((zi - &self.rho) * &self.scale).ceil().to_integer();
                let hi = ((zi + &self.rho) * &self.scale).floor().to_integer();
                (lo, hi)
            })
            .collect()
    }

    /// Number of lattice points, saturating at u128::MAX.
    pub fn lattice_size(&self) -> u128 {
        let mut total: u128 = 1;
        for (lo, hi) in self.lattice_ranges() {
            if hi < lo {
                return 0;
            }
            let len = (hi - lo + 1u32).to_u128().unwrap_or(u128::MAX);
            total = total.saturating_mul(len);
        }
        total
    }
}

/// Exact histogram of the integer values C(x) over the lattice points of a box.
pub fn box_value_histogram(
    form: &CubicForm,
    bx: &BoxSpec,
    budget: Option<u128>,
) -> Result<BTreeMap<BigInt, u64>> {
    if bx.dim() != form.n() {
        return Err(Error::DimensionMismatch { expected: form.n(), found: bx.dim() });
    }
    let budget = budget_or(budget);
    let required = bx.lattice_size();
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let ranges = bx.lattice_ranges();
    if ranges.iter().any(|(lo, hi)| hi < lo) {
        return Ok(BTreeMap::new());
    }
    let mut hist = BTreeMap::new();
    let mut x = vec![BigInt::zero(); form.n()];
    hist_rec(form, &ranges, &mut x, 0, &mut hist);
    Ok(hist)
}

fn hist_rec(
    form: &CubicForm,
    ranges: &[(BigInt, BigInt)],
    x: &mut Vec<BigInt>,
    depth: usize,
    hist: &mut BTreeMap<BigInt, u64>,
) {
    if depth == ranges.len() {
        let v = form.eval_big(x).expect("dimension checked");
        *hist.entry(v).or_insert(0) += 1;
        return;
    }
    let (lo, hi) = &ranges[depth];
    let mut cur = lo.clone();
    while cur <= *hi {
        x[depth] = cur.clone();
        hist_rec(form, ranges, x, depth + 1, hist);
        cur += 1;
    }
}

/// The generating sum S(α) = Σ_{x ∈ Zⁿ ∩ P𝓑} e(α·C(x)), evaluated by
/// grouping lattice points into the exact value histogram and then summing
/// counts[v]·e(αv) in ascending value order.
#[derive(Clone, Debug)]
pub struct GeneratingSum {
    pub lattice_points: u64,
    pub histogram: BTreeMap<BigInt, u64>,
    pub re: BigFloat,
    pub im: BigFloat,
}

impl GeneratingSum {
    /// The v = 0 class: the number of zeros of C in the box.
    pub fn zero_class(&self) -> u64 {
        self.histogram.get(&BigInt::zero()).copied().unwrap_or(0)
    }
}

pub fn generating_sum(
    form: &CubicForm,
    bx: &BoxSpec,
    alpha: &BigRational,
    budget: Option<u128>,
    ctx: &mut hp::Ctx,
) -> Result<GeneratingSum> {
    let histogram = box_value_histogram(form, bx, budget)?;
    let mut re = ctx.int(0);
    let mut im = ctx.int(0);
    let mut lattice_points = 0u64;
    for (v, &c) in &histogram {
        lattice_points += c;
        let t = alpha * BigRational::from_integer(v.clone());
        let (cv, sv) = ctx.cos_sin_2pi(&t);
        let w = ctx.big(&BigInt::from(c));
        let tc = ctx.mul(&w, &cv);
        let ts = ctx.mul(&w, &sv);
        re = ctx.add(&re, &tc);
        im = ctx.add(&im, &ts);
    }
    Ok(GeneratingSum { lattice_points, histogram, re, im })
}

/// N(P) = #{x ∈ Zⁿ ∩ P𝓑 : C(x) = 0} by direct enumeration (an independent
/// path from the histogram's v = 0 class).
pub fn zero_count_in_box(form: &CubicForm, bx: &BoxSpec, budget: Option<u128>) -> Result<u64> {
    if bx.dim() != form.n() {
        return Err(Error::DimensionMismatch { expected: form.n(), found: bx.dim() });
    }
    let budget = budget_or(budget);
    let required = bx.lattice_size();
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let ranges = bx.lattice_ranges();
    if ranges.iter().any(|(lo, hi)| hi < lo) {
        return Ok(0);
    }
    let mut x = vec![BigInt::zero(); form.n()];
    let mut count = 0u64;
    zero_rec(form, &ranges, &mut x, 0, &mut count);
    Ok(count)
}

fn zero_rec(
    form: &CubicForm,
    ranges: &[(BigInt, BigInt)],
    x: &mut Vec<BigInt>,
    depth: usize,
    count: &mut u64,
) {
    if depth == ranges.len() {
        if form.eval_big(x).expect("dimension checked").is_zero() {
            *count += 1;
        }
        return;
    }
    let (lo, hi) = &ranges[depth];
    let mut cur = lo.clone();
    while cur <= *hi {
        x[depth] = cur.clone();
        zero_rec(form, ranges, x, depth + 1, count);
        cur += 1;
    }
}

/// Growth audit of |S(a,q)| against the reference envelope
/// (Mⁿ·q^{5n})^{1/6}, sampled over units a mod q.
#[derive(Clone, Debug)]
pub struct BoundAuditRow {
    pub q: u64,
    pub sampled_a: Vec<u64>,
    pub argmax_a: u64,
    pub max_abs: BigFloat,
    pub max_ratio: BigFloat,
    /// Triangle-inequality cap |S(a,q)| ≤ qⁿ held for every sampled a
    /// (allowing float slack of one part in 10^(digits−5)).
    pub cap_ok: bool,
}

/// For each q: max over sampled units a of |S(a,q)| / (Mⁿ·q^{5n})^{1/6},
/// where M is the height of C. When φ(q) ≤ sample all units are used in
/// ascending order; otherwise `sample` distinct units are drawn from a
/// seeded deterministic stream.
pub fn bound_audit(
    form: &CubicForm,
    q_list: &[u64],
    sample: usize,
    seed: u64,
    budget: Option<u128>,
    ctx: &mut hp::Ctx,
) -> Result<Vec<BoundAuditRow>> {
    if sample == 0 {
        return Err(Error::Interval {
            what: "sample",
            value: "0".into(),
            interval: "[1, inf)".into(),
        });
    }
    let m = form.height()?;
    let n = form.n();
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(q_list.len());
    for &q in q_list {
        let dist = value_distribution(form, q, budget)?;
        let units: Vec<u64> = if q == 1 {
            vec![0]
        } else if arith::euler_phi(q) as u128 <= sample as u128 {
            (1..q).filter(|a| a.gcd(&q) == 1).collect()
        } else {
            let mut set = BTreeSet::new();
            while set.len() < sample {
                let a = rng.gen_range(1..q);
                if a.gcd(&q) == 1 {
                    set.insert(a);
                }
            }
            set.into_iter().collect()
        };
        let base = BigInt::from(m).pow(n as u32) * BigInt::from(q).pow(5 * n as u32);
        let base_f = ctx.big(&base);
        let denom = ctx.nth_root(&base_f, 6);
        let cap_r = BigRational::from_integer(BigInt::from(q).pow(n as u32))
            * (BigRational::one()
                + BigRational::new(
                    BigInt::one(),
                    BigInt::from(10).pow(ctx.digits().saturating_sub(5) as u32),
                ));
        let cap = ctx.rat(&cap_r);
        let mut cap_ok = true;
        let mut best: Option<(BigFloat, BigFloat, u64)> = None;
        for &a in &units {
            let rec = sum_from_distribution(&dist, a, ctx)?;
            if rec.abs > cap {
                cap_ok = false;
            }
            let ratio = ctx.div(&rec.abs, &denom);
            let replace = match &best {
                Some((r, _, _)) => ratio > *r,
                None => true,
            };
            if replace {
                best = Some((ratio, rec.abs.clone(), a));
            }
        }
        let (max_ratio, max_abs, argmax_a) = best.expect("at least one unit");
        rows.push(BoundAuditRow {
            q,
            sampled_a: units,
            argmax_a,
            max_abs,
            max_ratio,
            cap_ok,
        });
    }
    Ok(rows)
}
