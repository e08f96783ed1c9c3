//! Elementary multiplicative number theory over machine integers: primality,
//! factorization, Möbius, Euler φ, divisor lists, and Ramanujan sums c_q(m).

use std::collections::BTreeMap;

use num_integer::Integer;

/// Deterministic primality by trial division (adequate for the u64 moduli
/// handled here, which are budget-bounded well below 2^40).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while let Some(sq) = d.checked_mul(d) {
        if sq > n {
            break;
        }
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization as ascending (p, exponent) pairs; empty for n = 1.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    let mut push = |p: u64, n: &mut u64| {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                *n /= p;
                e += 1;
            }
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut d = 5u64;
    while let Some(sq) = d.checked_mul(d) {
        if sq > n {
            break;
        }
        push(d, &mut n);
        push(d + 2, &mut n);
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Möbius function: 0 on non-squarefree n, otherwise (−1)^(number of primes).
pub fn mobius(n: u64) -> i64 {
    let factors = factorize(n);
    if factors.iter().any(|&(_, e)| e > 1) {
        return 0;
    }
    if factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler totient φ(n).
pub fn euler_phi(n: u64) -> u64 {
    let mut phi = 1u64;
    for (p, e) in factorize(n) {
        phi *= p.pow(e - 1) * (p - 1);
    }
    phi
}

/// All divisors of n, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let prev = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(prev.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Ramanujan sums c_q(m) = Σ_{d | gcd(q,m)} d·μ(q/d), tabulated per gcd
/// class: the returned map sends each divisor g of q to c_q(g). Since c_q(m)
/// depends on m only through gcd(m, q), this covers every residue.
pub fn ramanujan_table(q: u64) -> BTreeMap<u64, i128> {
    let mut table = BTreeMap::new();
    for g in divisors(q) {
        let mut c: i128 = 0;
        for d in divisors(g) {
            c += d as i128 * mobius(q / d) as i128;
        }
        table.insert(g, c);
    }
    table
}

/// c_q(m) for a single residue (m may be any integer ≥ 0; m = 0 gives φ(q)).
pub fn ramanujan(q: u64, m: u64) -> i128 {
    let r = m % q;
    let g = if r == 0 { q } else { r.gcd(&q) };
    let mut c: i128 = 0;
    for d in divisors(g) {
        c += d as i128 * mobius(q / d) as i128;
    }
    c
}
