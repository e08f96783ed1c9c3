//! Exact integer linear algebra: fraction-free rank, Smith normal form,
//! determinantal divisors, and a brute minor-enumeration cross-check.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Rank over Q of an integer matrix, fraction-free (Bareiss) elimination on
/// i128 with exact overflow detection. Returns None if an intermediate
/// product would overflow; callers fall back to the big-integer path.
pub fn rank_i128(mut m: Vec<Vec<i128>>) -> Option<usize> {
    let rows = m.len();
    if rows == 0 {
        return Some(0);
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev: i128 = 1;
    let mut col = 0;
    while rank < rows && col < cols {
        // Find a pivot in this column at or below `rank`.
        let Some(p) = (rank..rows).find(|&r| m[r][col] != 0) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let a = m[rank][col].checked_mul(m[r][c])?;
                let b = m[r][col].checked_mul(m[rank][c])?;
                m[r][c] = a.checked_sub(b)? / prev;
            }
            m[r][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
        col += 1;
    }
    Some(rank)
}

/// Rank over Q via Bareiss elimination on big integers (no overflow).
pub fn rank_bigint(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    let mut col = 0;
    while rank < rows && col < cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let a = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                m[r][c] = a / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
        col += 1;
    }
    rank
}

/// Determinant of a square integer matrix (Bareiss; exact).
pub fn det_bigint(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for r in k + 1..n {
            for c in k + 1..n {
                let a = &m[k][k] * &m[r][c] - &m[r][k] * &m[k][c];
                m[r][c] = a / &prev;
            }
            m[r][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign < 0 {
        -d
    } else {
        d
    }
}

/// Smith normal form invariant factors (nonzero, each dividing the next) of
/// an integer matrix. The length of the result is the rank.
///
/// Each pivot step restarts whenever a division leaves a remainder; since the
/// remainder is strictly smaller in magnitude than the current minimal entry,
/// every restart shrinks the block's minimal absolute value and the loop
/// terminates.
pub fn smith_invariant_factors(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut factors = Vec::new();
    let mut top = 0;
    while top < rows && top < cols {
        'pivot: loop {
            // Locate the nonzero entry of least magnitude in the active block.
            let mut best: Option<(usize, usize)> = None;
            for r in top..rows {
                for c in top..cols {
                    if !m[r][c].is_zero() {
                        let better = match best {
                            Some((br, bc)) => m[r][c].abs() < m[br][bc].abs(),
                            None => true,
                        };
                        if better {
                            best = Some((r, c));
                        }
                    }
                }
            }
            let Some((br, bc)) = best else {
                return factors; // all-zero block: done
            };
            m.swap(top, br);
            for row in m.iter_mut() {
                row.swap(top, bc);
            }
            // Clear the pivot column with row operations.
            for r in top + 1..rows {
                if m[r][top].is_zero() {
                    continue;
                }
                let q = div_nearest(&m[r][top], &m[top][top]);
                let (head, tail) = m.split_at_mut(r);
                for (dst, src) in tail[0][top..].iter_mut().zip(&head[top][top..]) {
                    *dst -= &q * src;
                }
                if !m[r][top].is_zero() {
                    continue 'pivot; // smaller entry appeared
                }
            }
            // Clear the pivot row with column operations.
            for c in top + 1..cols {
                if m[top][c].is_zero() {
                    continue;
                }
                let q = div_nearest(&m[top][c], &m[top][top]);
                for row in m.iter_mut().take(rows) {
                    let sub = &q * &row[top];
                    row[c] -= sub;
                }
                if !m[top][c].is_zero() {
                    continue 'pivot;
                }
            }
            // Enforce divisibility into the trailing block: fold an offending
            // row into the pivot row and redo this pivot.
            let pivot = m[top][top].clone();
            for r in top + 1..rows {
                if m[r]
                    .iter()
                    .skip(top + 1)
                    .any(|v| !(v % &pivot).is_zero())
                {
                    let (head, tail) = m.split_at_mut(r);
                    for (dst, src) in head[top][top..].iter_mut().zip(&tail[0][top..]) {
                        *dst += src;
                    }
                    continue 'pivot;
                }
            }
            factors.push(pivot.abs());
            break;
        }
        top += 1;
    }
    factors
}

/// Signed quotient rounding toward the nearest integer (minimizes the
/// remainder's magnitude), used to shrink entries fast in the Smith loop.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (q, r) = a.div_rem(b);
    let two_r = &r * 2i32;
    if two_r.abs() > b.abs() {
        if (r.sign() == b.sign()) || r.is_zero() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// n-th determinantal divisor (gcd of all maximal minors) of an n×m integer
/// matrix with n ≤ m, computed as the product of the Smith invariant factors;
/// zero when the rank is deficient.
pub fn maximal_determinantal_divisor(m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let factors = smith_invariant_factors(m);
    if factors.len() < n {
        return BigInt::zero();
    }
    factors.into_iter().product()
}

/// Brute-force oracle: gcd over all n×n minors, enumerated explicitly.
/// Exponential in the column count; intended for cross-checks only.
pub fn gcd_of_maximal_minors(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let cols = m[0].len();
    if cols < n {
        return BigInt::zero();
    }
    let mut g = BigInt::zero();
    let mut choice = Vec::with_capacity(n);
    fn rec(
        m: &[Vec<BigInt>],
        n: usize,
        cols: usize,
        start: usize,
        choice: &mut Vec<usize>,
        g: &mut BigInt,
    ) {
        if choice.len() == n {
            let sub: Vec<Vec<BigInt>> = m
                .iter()
                .map(|row| choice.iter().map(|&c| row[c].clone()).collect())
                .collect();
            let d = det_bigint(sub);
            *g = g.gcd(&d);
            return;
        }
        let need = n - choice.len();
        for c in start..=cols - need {
            choice.push(c);
            rec(m, n, cols, c + 1, choice, g);
            choice.pop();
        }
    }
    rec(m, n, cols, 0, &mut choice, &mut g);
    g
}
