//! Shared helpers for the integration suites: an independent symbolic
//! polynomial engine, exact cyclotomic arithmetic, naive counting oracles,
//! and seeded corpus generators. Everything here is deliberately written
//! from scratch (no reuse of the library's internal algorithms) so the
//! suites cross-check rather than echo the implementation.
#![allow(dead_code)]

use std::collections::BTreeMap;

use cubist::forms::CubicForm;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big_rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

// ---------------------------------------------------------------------------
// Symbolic multivariate polynomials over Q (exponent-vector → coefficient).

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, BigRational>,
}

impl Poly {
    pub fn zero(n: usize) -> Poly {
        Poly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: BigRational) -> Poly {
        let mut p = Poly::zero(n);
        if !c.is_zero() {
            p.terms.insert(vec![0; n], c);
        }
        p
    }

    /// x_i (0-based).
    pub fn var(n: usize, i: usize) -> Poly {
        let mut e = vec![0u32; n];
        e[i] = 1;
        let mut p = Poly::zero(n);
        p.terms.insert(e, BigRational::one());
        p
    }

    fn insert(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exps).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            let key: Vec<Vec<u32>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!(self.n, o.n);
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.insert(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&rat(-1, 1)))
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        let mut out = Poly::zero(self.n);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.n, o.n);
        let mut out = Poly::zero(self.n);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.insert(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut out = Poly::constant(self.n, BigRational::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// ∂/∂x_i.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.insert(f, c * big_rat(BigInt::from(e[i])));
        }
        out
    }

    pub fn eval(&self, x: &[BigRational]) -> BigRational {
        assert_eq!(x.len(), self.n);
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= &x[i];
                }
            }
            acc += term;
        }
        acc
    }

    pub fn eval_int(&self, x: &[i64]) -> BigRational {
        let xs: Vec<BigRational> = x.iter().map(|&v| big_rat(BigInt::from(v))).collect();
        self.eval(&xs)
    }

    /// P(r_0, …, r_{n−1}) for replacement polynomials r_i.
    pub fn subst(&self, reps: &[Poly]) -> Poly {
        assert_eq!(reps.len(), self.n);
        let m = reps.first().map(|r| r.n).unwrap_or(0);
        let mut out = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                term = term.mul(&reps[i].pow(k));
            }
            out = out.add(&term);
        }
        out
    }

    /// Same polynomial the form expands to, built from the monomial view.
    pub fn from_form(f: &CubicForm) -> Poly {
        let n = f.n();
        let mut out = Poly::zero(n);
        for (triple, coef) in f.monomials() {
            let mut e = vec![0u32; n];
            for idx in triple {
                e[idx] += 1;
            }
            out.insert(e, big_rat(BigInt::from(coef)));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Exact univariate integer polynomials and cyclotomics (for the exact
// orthogonality oracle): coefficients ascending by degree.

fn upoly_trim(p: &mut Vec<BigInt>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

/// Exact division of a by monic b: returns the remainder (quotient dropped).
pub fn upoly_rem_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    assert!(b.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut r: Vec<BigInt> = a.to_vec();
    upoly_trim(&mut r);
    let db = b.len() - 1;
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        for (i, bc) in b.iter().enumerate() {
            let idx = shift + i;
            let delta = &lead * bc;
            r[idx] -= delta;
        }
        upoly_trim(&mut r);
        if r.len() - 1 < db {
            break;
        }
    }
    r
}

/// Exact quotient a / b for monic b when the division is exact.
pub fn upoly_div_exact_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r: Vec<BigInt> = a.to_vec();
    upoly_trim(&mut r);
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len().saturating_sub(db)];
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let lead = r.last().unwrap().clone();
        let shift = r.len() - 1 - db;
        q[shift] = lead.clone();
        for (i, bc) in b.iter().enumerate() {
            let delta = &lead * bc;
            r[shift + i] -= delta;
        }
        upoly_trim(&mut r);
        if r.len() == 1 && r[0].is_zero() {
            break;
        }
    }
    assert!(r.len() == 1 && r[0].is_zero(), "division was not exact");
    if q.is_empty() {
        q.push(BigInt::zero());
    }
    q
}

/// Φ_q(x) by the recursive identity x^q − 1 = Π_{d|q} Φ_d(x).
pub fn cyclotomic(q: u64) -> Vec<BigInt> {
    assert!(q >= 1);
    let mut num = vec![BigInt::zero(); q as usize + 1];
    num[0] = BigInt::from(-1);
    num[q as usize] = BigInt::one();
    let mut phi = num;
    for d in 1..q {
        if q.is_multiple_of(d) {
            let phi_d = cyclotomic(d);
            phi = upoly_div_exact_monic(&phi, &phi_d);
        }
    }
    phi
}

/// Residue coefficient vector of Σ_{a mod q} S(a,q) in Z[x]/(x^q − 1):
/// entry j collects counts[m] over all (a, m) with a·m ≡ j (mod q).
pub fn raw_sum_vector(counts: &[BigUint], q: u64) -> Vec<BigInt> {
    let mut t = vec![BigInt::zero(); q as usize];
    for a in 0..q {
        for (m, c) in counts.iter().enumerate() {
            let j = ((a as u128 * m as u128) % q as u128) as usize;
            t[j] += BigInt::from(c.clone());
        }
    }
    t
}

// ---------------------------------------------------------------------------
// Naive counting oracles (straight loops, exact arithmetic).

/// Residue histogram of C(x) mod q over [0,q)ⁿ by direct BigInt evaluation.
pub fn naive_distribution(form: &CubicForm, q: u64) -> Vec<BigUint> {
    let n = form.n();
    let mut counts = vec![BigUint::zero(); q as usize];
    let mut x = vec![0u64; n];
    loop {
        let point: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let v = form.eval_big(&point).unwrap();
        let r = v.mod_floor(&BigInt::from(q)).to_u64().unwrap();
        counts[r as usize] += BigUint::one();
        let mut i = 0;
        loop {
            if i == n {
                return counts;
            }
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// All nonzero integer zeros of C with |x|_∞ ≤ a, in plain odometer order.
pub fn naive_zeros_in_box(form: &CubicForm, a: i64) -> Vec<Vec<i64>> {
    let n = form.n();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut x = vec![-a; n];
    loop {
        if x.iter().any(|&v| v != 0) {
            let point: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
            if form.eval_big(&point).unwrap().is_zero() {
                out.push(x.clone());
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            x[i] += 1;
            if x[i] <= a {
                break;
            }
            x[i] = -a;
            i += 1;
        }
    }
}

/// Smallest radius ≤ a_max whose shell carries a nonzero zero, with the
/// complete zero set of the closed box at that radius.
pub fn naive_least_zero(form: &CubicForm, a_max: i64) -> Option<(u32, Vec<Vec<i64>>)> {
    for a in 1..=a_max {
        let zs = naive_zeros_in_box(form, a);
        if !zs.is_empty() {
            return Some((a as u32, zs));
        }
    }
    None
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

// ---------------------------------------------------------------------------
// Seeded corpora.

/// Random nonzero cubic form: up to `max_terms` monomials over n variables,
/// coefficients in [−bound, bound] \ {0}.
pub fn random_form(r: &mut ChaCha20Rng, n: usize, max_terms: usize, bound: i64) -> CubicForm {
    loop {
        let terms = r.gen_range(1..=max_terms);
        let mut monos = Vec::with_capacity(terms);
        for _ in 0..terms {
            let mut t = [
                r.gen_range(0..n),
                r.gen_range(0..n),
                r.gen_range(0..n),
            ];
            t.sort_unstable();
            let mut c = 0i64;
            while c == 0 {
                c = r.gen_range(-bound..=bound);
            }
            monos.push((t, c));
        }
        let f = CubicForm::from_monomials(n, &monos).unwrap();
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random diagonal form with every coefficient nonzero.
pub fn random_diagonal(r: &mut ChaCha20Rng, n: usize, bound: i64) -> CubicForm {
    let monos: Vec<([usize; 3], i64)> = (0..n)
        .map(|i| {
            let mut c = 0i64;
            while c == 0 {
                c = r.gen_range(-bound..=bound);
            }
            ([i, i, i], c)
        })
        .collect();
    CubicForm::from_monomials(n, &monos).unwrap()
}

pub fn random_point(r: &mut ChaCha20Rng, n: usize, bound: i64) -> Vec<i64> {
    (0..n).map(|_| r.gen_range(-bound..=bound)).collect()
}

/// Random unimodular matrix: identity worked over by `steps` elementary
/// operations (add ±1·row, swap, negate), entries stay small.
pub fn random_unimodular(r: &mut ChaCha20Rng, n: usize, steps: usize) -> Vec<Vec<i64>> {
    let mut u: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        match r.gen_range(0..3) {
            0 => {
                let i = r.gen_range(0..n);
                let mut j = r.gen_range(0..n);
                if n > 1 {
                    while j == i {
                        j = r.gen_range(0..n);
                    }
                    let s: i64 = if r.gen_bool(0.5) { 1 } else { -1 };
                    for row in u.iter_mut() {
                        row[i] += s * row[j];
                    }
                }
            }
            1 => {
                let i = r.gen_range(0..n);
                let j = r.gen_range(0..n);
                if i != j {
                    for row in u.iter_mut() {
                        row.swap(i, j);
                    }
                }
            }
            _ => {
                let i = r.gen_range(0..n);
                for row in u.iter_mut() {
                    row[i] = -row[i];
                }
            }
        }
    }
    u
}

/// Exact determinant by cofactor expansion — independent of the library's
/// elimination code. Only for the small matrices used in tests.
pub fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BigInt::zero();
    for (j, mj) in m[0].iter().enumerate() {
        if mj.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = mj * det_cofactor(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

/// Rank = largest k with a nonzero k×k minor, enumerated combinatorially.
pub fn rank_by_minors(m: &[Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let max_k = rows.min(cols);
    for k in (1..=max_k).rev() {
        for rs in combinations(rows, k) {
            for cs in combinations(cols, k) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&ri| cs.iter().map(|&ci| m[ri][ci].clone()).collect())
                    .collect();
                if !det_cofactor(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

/// gcd of all k×k minors (0 when every minor vanishes).
pub fn minor_gcd(m: &[Vec<BigInt>], k: usize) -> BigInt {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut g = BigInt::zero();
    for rs in combinations(rows, k) {
        for cs in combinations(cols, k) {
            let sub: Vec<Vec<BigInt>> = rs
                .iter()
                .map(|&ri| cs.iter().map(|&ci| m[ri][ci].clone()).collect())
                .collect();
            g = g.gcd(&det_cofactor(&sub));
        }
    }
    g.abs()
}

pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] + (k - i) < n {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
