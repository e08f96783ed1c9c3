//! Exact representation and invariants of integer cubic forms.
//!
//! A form C(x) = Σ c_ijk x_i x_j x_k with symmetric rational coefficients is
//! stored as the integer tensor t_ijk = 6·c_ijk over sorted index triples;
//! any polynomial with integer monomial coefficients yields an integral
//! tensor (t_iii = 6a, t_iij = 2a, t_ijk = a for the monomial coefficient a).
//! On top of the tensor sit the height, the symmetric matrix M(x) with
//! entries Σ_i c_ijk x_i, exact rank censuses over boxes, the bilinear forms
//! B_i(h;w), and the determinantal-divisor invariant Δ(C).

pub mod linalg;
mod parse;

use std::collections::BTreeMap;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hp;
pub use parse::{parse_form, to_document, to_text, FormDocument, MonomialEntry};

/// Default lattice-point budget for box enumerations in this module.
pub const DEFAULT_CENSUS_BUDGET: u128 = 100_000_000;

/// A cubic form in n variables with integer monomial coefficients, stored as
/// the symmetric integer tensor t_ijk = 6·c_ijk (sorted triples, 0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicForm {
    n: usize,
    tens: BTreeMap<[usize; 3], i64>,
}

fn sorted3(mut t: [usize; 3]) -> [usize; 3] {
    t.sort_unstable();
    t
}

/// 6 / (number of ordered rearrangements of the sorted triple): the factor
/// taking a monomial coefficient to its tensor entry.
fn tensor_factor(t: [usize; 3]) -> i64 {
    if t[0] == t[2] {
        6
    } else if t[0] == t[1] || t[1] == t[2] {
        2
    } else {
        1
    }
}

impl CubicForm {
    /// Build from (sorted index triple, monomial coefficient) pairs; repeated
    /// triples are summed. Indices must be < n.
    pub fn from_monomials(n: usize, monomials: &[([usize; 3], i64)]) -> Result<CubicForm> {
        let mut acc: BTreeMap<[usize; 3], i64> = BTreeMap::new();
        for &(raw, coef) in monomials {
            let triple = sorted3(raw);
            if let Some(&idx) = triple.iter().find(|&&i| i >= n) {
                return Err(Error::VarIndex { index: idx + 1, n });
            }
            let entry = acc.entry(triple).or_insert(0);
            *entry = entry.checked_add(coef).ok_or_else(|| {
                Error::Invalid("monomial coefficient overflows 64 bits".into())
            })?;
        }
        let mut tens = BTreeMap::new();
        for (triple, a) in acc {
            if a == 0 {
                continue;
            }
            let t = a.checked_mul(tensor_factor(triple)).ok_or_else(|| {
                Error::Invalid("tensor entry overflows 64 bits".into())
            })?;
            tens.insert(triple, t);
        }
        Ok(CubicForm { n, tens })
    }

    /// Build directly from tensor entries t_ijk = 6·c_ijk (sorted triples).
    /// Rejects tensors that do not come from an integer polynomial.
    pub fn from_tensor(n: usize, entries: &[([usize; 3], i64)]) -> Result<CubicForm> {
        let mut tens: BTreeMap<[usize; 3], i64> = BTreeMap::new();
        for &(raw, t) in entries {
            let triple = sorted3(raw);
            if let Some(&idx) = triple.iter().find(|&&i| i >= n) {
                return Err(Error::VarIndex { index: idx + 1, n });
            }
            let factor = tensor_factor(triple);
            if t % factor != 0 {
                return Err(Error::Invalid(format!(
                    "tensor entry {} at {:?} is not divisible by {}",
                    t, triple, factor
                )));
            }
            *tens.entry(triple).or_insert(0) += t;
        }
        tens.retain(|_, t| *t != 0);
        Ok(CubicForm { n, tens })
    }

    pub fn from_document(doc: &FormDocument) -> Result<CubicForm> {
        let mut monomials = Vec::with_capacity(doc.monomials.len());
        for entry in &doc.monomials {
            if entry.exps.len() != doc.n {
                return Err(Error::DimensionMismatch {
                    expected: doc.n,
                    found: entry.exps.len(),
                });
            }
            let degree: u32 = entry.exps.iter().sum();
            if degree != 3 {
                return Err(Error::Degree { pos: 0, degree });
            }
            let mut triple = Vec::with_capacity(3);
            for (idx, &e) in entry.exps.iter().enumerate() {
                for _ in 0..e {
                    triple.push(idx);
                }
            }
            monomials.push(([triple[0], triple[1], triple[2]], entry.coef));
        }
        CubicForm::from_monomials(doc.n, &monomials)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.tens.is_empty()
    }

    /// Tensor entry t_ijk = 6·c_ijk for any index order; zero if absent.
    pub fn tensor_entry(&self, triple: [usize; 3]) -> i64 {
        self.tens.get(&sorted3(triple)).copied().unwrap_or(0)
    }

    /// Monomial coefficient of Π x_i over the triple (exact integer).
    pub fn coeff_of(&self, triple: [usize; 3]) -> i64 {
        let t = sorted3(triple);
        self.tensor_entry(t) / tensor_factor(t)
    }

    /// Iterate (sorted triple, monomial coefficient) in canonical order.
    pub fn monomials(&self) -> impl Iterator<Item = ([usize; 3], i64)> + '_ {
        self.tens
            .iter()
            .map(|(&t, &v)| (t, v / tensor_factor(t)))
    }

    /// Height ‖C‖: maximum |monomial coefficient| of the expanded polynomial.
    pub fn height(&self) -> Result<u64> {
        self.monomials()
            .map(|(_, a)| a.unsigned_abs())
            .max()
            .ok_or(Error::ZeroForm)
    }

    /// Maximum |t_ijk| of the symmetric tensor (secondary height convention).
    pub fn tensor_max(&self) -> Result<u64> {
        self.tens
            .values()
            .map(|t| t.unsigned_abs())
            .max()
            .ok_or(Error::ZeroForm)
    }

    /// True when only t_iii entries are present.
    pub fn is_diagonal(&self) -> bool {
        self.tens.keys().all(|t| t[0] == t[2])
    }

    /// Diagonal coefficients (the a_i of Σ a_i x_i³) when diagonal.
    pub fn diagonal_coeffs(&self) -> Option<Vec<i64>> {
        if !self.is_diagonal() {
            return None;
        }
        Some((0..self.n).map(|i| self.coeff_of([i, i, i])).collect())
    }

    fn check_dim(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: len });
        }
        Ok(())
    }

    /// Exact evaluation over big integers.
    pub fn eval_big(&self, x: &[BigInt]) -> Result<BigInt> {
        self.check_dim(x.len())?;
        let mut sum = BigInt::zero();
        for (t, a) in self.monomials() {
            sum += BigInt::from(a) * &x[t[0]] * &x[t[1]] * &x[t[2]];
        }
        Ok(sum)
    }

    /// Checked evaluation in i128 (None on overflow).
    pub fn eval_i128(&self, x: &[i64]) -> Option<i128> {
        debug_assert_eq!(x.len(), self.n);
        let mut sum: i128 = 0;
        for (t, a) in self.monomials() {
            let p = (a as i128)
                .checked_mul(x[t[0]] as i128)?
                .checked_mul(x[t[1]] as i128)?
                .checked_mul(x[t[2]] as i128)?;
            sum = sum.checked_add(p)?;
        }
        Some(sum)
    }

    /// The symmetric matrix M(x) with entries (j,k) ↦ Σ_i c_ijk x_i, as
    /// exact rationals (entries are integers divided by 6).
    pub fn matrix_of(&self, x: &[i64]) -> Result<Vec<Vec<BigRational>>> {
        let six = self.six_matrix_i128(x)?;
        Ok(six
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| BigRational::new(BigInt::from(v), BigInt::from(6)))
                    .collect()
            })
            .collect())
    }

    /// 6·M(x), an integer matrix (used for exact rank computations).
    fn six_matrix_i128(&self, x: &[i64]) -> Result<Vec<Vec<i128>>> {
        self.check_dim(x.len())?;
        let n = self.n;
        let mut m = vec![vec![0i128; n]; n];
        for (&[i, j, k], &t) in &self.tens {
            // Distribute t over the distinct (j,k) slots of each tensor index.
            // For the sorted triple (i,j,k), the ordered occurrences are all
            // permutations; entry (j,k) of 6M gets Σ over first index of t.
            let mut add = |a: usize, b: usize, c: usize| {
                m[b][c] += t as i128 * x[a] as i128;
            };
            if i == j && j == k {
                add(i, i, i);
            } else if i == j {
                // triples (i,i,k): first index i twice on (i,k)/(k,i), k on (i,i)
                add(i, i, k);
                add(i, k, i);
                add(k, i, i);
            } else if j == k {
                add(i, j, j);
                add(j, i, j);
                add(j, j, i);
            } else {
                add(i, j, k);
                add(i, k, j);
                add(j, i, k);
                add(j, k, i);
                add(k, i, j);
                add(k, j, i);
            }
        }
        Ok(m)
    }

    /// Exact rank over Q of M(x).
    pub fn rank_of(&self, x: &[i64]) -> Result<usize> {
        let six = self.six_matrix_i128(x)?;
        match linalg::rank_i128(six.clone()) {
            Some(r) => Ok(r),
            None => {
                let big: Vec<Vec<BigInt>> = six
                    .into_iter()
                    .map(|row| row.into_iter().map(BigInt::from).collect())
                    .collect();
                Ok(linalg::rank_bigint(big))
            }
        }
    }

    /// Bilinear forms B_i(h;w) = Σ_{j,k} c_ijk h_j w_k, exact rationals.
    pub fn bilinear(&self, h: &[i64], w: &[i64]) -> Result<Vec<BigRational>> {
        self.check_dim(h.len())?;
        self.check_dim(w.len())?;
        let n = self.n;
        let mut six_b = vec![0i128; n];
        for (&[i, j, k], &t) in &self.tens {
            let t = t as i128;
            let mut add = |a: usize, b: usize, c: usize| {
                six_b[a] += t * h[b] as i128 * w[c] as i128;
            };
            if i == j && j == k {
                add(i, i, i);
            } else if i == j {
                add(i, i, k);
                add(i, k, i);
                add(k, i, i);
            } else if j == k {
                add(i, j, j);
                add(j, i, j);
                add(j, j, i);
            } else {
                add(i, j, k);
                add(i, k, j);
                add(j, i, k);
                add(j, k, i);
                add(k, i, j);
                add(k, j, i);
            }
        }
        Ok(six_b
            .into_iter()
            .map(|v| BigRational::new(BigInt::from(v), BigInt::from(6)))
            .collect())
    }

    /// Substitute x = U·y for an integer matrix U (columns index the new
    /// variables); returns the form in y.
    pub fn substitute(&self, u: &[Vec<i64>]) -> Result<CubicForm> {
        self.check_dim(u.len())?;
        for row in u {
            self.check_dim(row.len())?;
        }
        let n = self.n;
        let mut acc: BTreeMap<[usize; 3], i128> = BTreeMap::new();
        for (t, a) in self.monomials() {
            // Expand a · L_{t0}(y) L_{t1}(y) L_{t2}(y).
            for (r, &ur) in u[t[0]].iter().enumerate() {
                let ur = ur as i128;
                if ur == 0 {
                    continue;
                }
                for (s, &us) in u[t[1]].iter().enumerate() {
                    let us = us as i128;
                    if us == 0 {
                        continue;
                    }
                    for (q, &uq) in u[t[2]].iter().enumerate() {
                        let uq = uq as i128;
                        if uq == 0 {
                            continue;
                        }
                        let triple = sorted3([r, s, q]);
                        *acc.entry(triple).or_insert(0) += a as i128 * ur * us * uq;
                    }
                }
            }
        }
        let monomials: Vec<([usize; 3], i64)> = acc
            .into_iter()
            .filter(|(_, v)| *v != 0)
            .map(|(t, v)| {
                i64::try_from(v)
                    .map(|v| (t, v))
                    .map_err(|_| Error::Invalid("substitution coefficient overflow".into()))
            })
            .collect::<Result<_>>()?;
        CubicForm::from_monomials(n, &monomials)
    }

    /// Divide out the content (gcd of monomial coefficients); errors on the
    /// zero form. Returns the primitive form and the content.
    pub fn normalize(&self) -> Result<(CubicForm, u64)> {
        if self.is_zero() {
            return Err(Error::ZeroForm);
        }
        let content = self
            .monomials()
            .fold(0u64, |g, (_, a)| g.gcd(&a.unsigned_abs()));
        let monomials: Vec<([usize; 3], i64)> = self
            .monomials()
            .map(|(t, a)| (t, a / content as i64))
            .collect();
        Ok((CubicForm::from_monomials(self.n, &monomials)?, content))
    }

    pub fn to_text(&self) -> String {
        to_text(self)
    }

    pub fn to_document(&self) -> FormDocument {
        to_document(self)
    }
}

/// Exact counts of box lattice points by rank of M(x).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCensus {
    pub h: u32,
    /// counts[r] = #{x : |x|_∞ ≤ h, rank M(x) = r}, length n+1.
    pub counts: Vec<u128>,
}

impl RankCensus {
    /// log(counts[r]) / log(2H) per rank, when counts[r] > 1.
    pub fn exponent_ratios(&self, ctx: &mut hp::Ctx) -> Vec<Option<BigFloat>> {
        let log_base = ctx.ln(&ctx.int(2 * self.h as i64));
        self.counts
            .iter()
            .map(|&c| {
                if c > 1 {
                    let c_hp = ctx.big(&BigInt::from(c));
                    let lc = ctx.ln(&c_hp);
                    Some(ctx.div(&lc, &log_base))
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Exact rank census of the box |x|_∞ ≤ h.
pub fn rank_census(form: &CubicForm, h: u32, budget: Option<u128>) -> Result<RankCensus> {
    if h == 0 {
        return Err(Error::Interval {
            what: "H",
            value: "0".into(),
            interval: "[1, inf)".into(),
        });
    }
    let budget = budget.unwrap_or(DEFAULT_CENSUS_BUDGET);
    let n = form.n();
    let side = 2 * h as u128 + 1;
    let required = side
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if required > budget {
        return Err(Error::Budget { required, budget });
    }
    let hi = h as i64;
    let counts = (-hi..=hi)
        .into_par_iter()
        .map(|first| {
            let mut local = vec![0u128; n + 1];
            let mut x = vec![0i64; n];
            x[0] = first;
            census_rec(form, &mut x, 1, hi, &mut local);
            local
        })
        .reduce(
            || vec![0u128; n + 1],
            |mut a, b| {
                for (ai, bi) in a.iter_mut().zip(b) {
                    *ai += bi;
                }
                a
            },
        );
    Ok(RankCensus { h, counts })
}

fn census_rec(form: &CubicForm, x: &mut Vec<i64>, depth: usize, h: i64, counts: &mut [u128]) {
    if depth == form.n() {
        let r = form.rank_of(x).expect("dimension fixed");
        counts[r] += 1;
        return;
    }
    for v in -h..=h {
        x[depth] = v;
        census_rec(form, x, depth + 1, h, counts);
    }
}

/// One row of the ϑ-goodness probe at box radius h.
#[derive(Clone, Debug)]
pub struct GoodProfile {
    pub h: u32,
    pub census: RankCensus,
    /// max over r of log(counts[r])/log(2H) − r (None when every class has
    /// at most one point, i.e. nothing to measure).
    pub worst_excess: Option<BigFloat>,
    pub worst_rank: Option<usize>,
}

/// Empirical probe of the rank-census growth exponents at several radii.
/// Radii must be ≥ 2 so that log(2H) is safely away from zero.
pub fn good_exponent_profile(
    form: &CubicForm,
    h_list: &[u32],
    budget: Option<u128>,
    ctx: &mut hp::Ctx,
) -> Result<Vec<GoodProfile>> {
    let mut out = Vec::with_capacity(h_list.len());
    for &h in h_list {
        if h < 2 {
            return Err(Error::Interval {
                what: "H",
                value: h.to_string(),
                interval: "[2, inf)".into(),
            });
        }
        let census = rank_census(form, h, budget)?;
        let ratios = census.exponent_ratios(ctx);
        let mut worst: Option<(BigFloat, usize)> = None;
        for (r, ratio) in ratios.into_iter().enumerate() {
            let Some(ratio) = ratio else { continue };
            let excess = ctx.sub(&ratio, &ctx.int(r as i64));
            let replace = match &worst {
                Some((w, _)) => excess > *w,
                None => true,
            };
            if replace {
                worst = Some((excess, r));
            }
        }
        let (worst_excess, worst_rank) = match worst {
            Some((w, r)) => (Some(w), Some(r)),
            None => (None, None),
        };
        out.push(GoodProfile { h, census, worst_excess, worst_rank });
    }
    Ok(out)
}

/// Davenport-style invariant: the n-th determinantal divisor of the n×n(n+1)/2
/// matrix of quadratic-derivative coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaInvariant {
    pub value: BigInt,
    pub degenerate: bool,
    /// Scaling L ∈ {1, 3} left on the matrix when L^n did not divide the raw
    /// divisor; 1 means the reported value is on the natural scale.
    pub scale: u32,
}

/// The integer matrix D with rows i and columns {j ≤ k}, entry = coefficient
/// of x_j x_k in ∂C/∂x_i (so D = 3B for the bilinear coefficient matrix B),
/// together with the factor L such that the returned matrix equals L·B.
pub fn davenport_matrix(form: &CubicForm) -> (Vec<Vec<BigInt>>, u32) {
    let n = form.n();
    let mut d: Vec<Vec<i64>> = vec![Vec::with_capacity(n * (n + 1) / 2); n];
    for (i, row) in d.iter_mut().enumerate() {
        for j in 0..n {
            for k in j..n {
                let t = form.tensor_entry([i, j, k]);
                let entry = if j == k { t / 2 } else { t };
                row.push(entry);
            }
        }
    }
    let content = d
        .iter()
        .flatten()
        .fold(0u64, |g, &v| g.gcd(&v.unsigned_abs()));
    let g = content.gcd(&3).max(1);
    let l = (3 / g) as u32;
    let scaled = d
        .into_iter()
        .map(|row| row.into_iter().map(|v| BigInt::from(v / g as i64)).collect())
        .collect();
    (scaled, l)
}

/// Δ(C): gcd of all n×n minors of the derivative-coefficient matrix, on the
/// natural (L = 1) scale whenever the scaling divides out.
pub fn delta_invariant(form: &CubicForm) -> Result<DeltaInvariant> {
    let n = form.n();
    if n < 2 {
        return Err(Error::SmallN { n: n as u32, min: 2 });
    }
    let (matrix, l) = davenport_matrix(form);
    let raw = linalg::maximal_determinantal_divisor(matrix);
    if raw.is_zero() {
        return Ok(DeltaInvariant { value: raw, degenerate: true, scale: 1 });
    }
    let l_pow = BigInt::from(l).pow(n as u32);
    if (&raw % &l_pow).is_zero() {
        Ok(DeltaInvariant { value: raw / l_pow, degenerate: false, scale: 1 })
    } else {
        Ok(DeltaInvariant { value: raw, degenerate: false, scale: l })
    }
}
