//! Exact arithmetic in a real quadratic field Q(√d).
//!
//! Every quantity in the exponent pipeline is a + b√d with rational a, b and
//! a fixed nonnegative integer radicand d, so identities hold exactly and
//! comparisons, floors, and ceilings never depend on floating point. Decimal
//! rendering happens once, at the edge, from an exact integer floor of a
//! scaled value.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::decimal;

/// a + b√d with exact rational a, b. If d is a perfect square the radical is
/// folded away on construction, so `b != 0` implies √d is irrational.
#[derive(Clone, Debug)]
pub struct Quad {
    a: BigRational,
    b: BigRational,
    d: u64,
}

fn rat_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact sign of a + b√d (with √d irrational whenever b ≠ 0).
fn sign_of(a: &BigRational, b: &BigRational, d: u64) -> i32 {
    if b.is_zero() {
        return num_sign(a);
    }
    if a.is_zero() {
        return num_sign(b);
    }
    let sa = num_sign(a);
    let sb = num_sign(b);
    if sa == sb {
        return sa;
    }
    // Opposite signs: |a| vs |b|√d decides, i.e. compare a² with b²·d.
    let a2 = a * a;
    let b2d = b * b * rat_i64(d as i64);
    match a2.cmp(&b2d) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        // Equality would force √d rational, excluded by the fold invariant.
        Ordering::Equal => 0,
    }
}

fn num_sign(v: &BigRational) -> i32 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

impl Quad {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Quad {
        if b.is_zero() {
            return Quad { a, b, d };
        }
        let root = (d as u128).sqrt() as u64;
        if root * root == d {
            // Perfect square: fold b√d into the rational part.
            let a = a + &b * rat_i64(root as i64);
            Quad { a, b: BigRational::zero(), d }
        } else {
            Quad { a, b, d }
        }
    }

    pub fn from_rat(a: BigRational) -> Quad {
        Quad { a, b: BigRational::zero(), d: 0 }
    }

    pub fn from_int(v: i64) -> Quad {
        Quad::from_rat(rat_i64(v))
    }

    /// √d itself as a field element.
    pub fn sqrt_d(d: u64) -> Quad {
        Quad::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_coeff(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// The rational value when `is_rational`, else None.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn joined_d(&self, other: &Quad) -> u64 {
        match (self.b.is_zero(), other.b.is_zero()) {
            (true, true) => 0,
            (false, true) => self.d,
            (true, false) => other.d,
            (false, false) => {
                assert_eq!(self.d, other.d, "mixed radicands {} vs {}", self.d, other.d);
                self.d
            }
        }
    }

    pub fn add(&self, other: &Quad) -> Quad {
        let d = self.joined_d(other);
        Quad::new(&self.a + &other.a, &self.b + &other.b, d)
    }

    pub fn sub(&self, other: &Quad) -> Quad {
        let d = self.joined_d(other);
        Quad::new(&self.a - &other.a, &self.b - &other.b, d)
    }

    pub fn neg(&self) -> Quad {
        Quad { a: -self.a.clone(), b: -self.b.clone(), d: self.d }
    }

    pub fn mul(&self, other: &Quad) -> Quad {
        let d = self.joined_d(other);
        let dd = rat_i64(d as i64);
        let a = &self.a * &other.a + &self.b * &other.b * &dd;
        let b = &self.a * &other.b + &self.b * &other.a;
        Quad::new(a, b, d)
    }

    pub fn mul_rat(&self, r: &BigRational) -> Quad {
        Quad { a: &self.a * r, b: &self.b * r, d: self.d }
    }

    pub fn inv(&self) -> Quad {
        assert!(self.sign() != 0, "division by zero");
        // 1/(a + b√d) = (a − b√d)/(a² − b²d)
        let dd = rat_i64(self.d as i64);
        let norm = &self.a * &self.a - &self.b * &self.b * &dd;
        Quad {
            a: &self.a / &norm,
            b: -(&self.b / &norm),
            d: self.d,
        }
    }

    pub fn div(&self, other: &Quad) -> Quad {
        self.mul(&other.inv())
    }

    pub fn sign(&self) -> i32 {
        sign_of(&self.a, &self.b, self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact floor as a big integer.
    pub fn floor_int(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // Clear denominators: self = (A + B√d)/D with D > 0.
        let da = self.a.denom().clone();
        let db = self.b.denom().clone();
        let dcm = da.lcm(&db);
        let aa = self.a.numer() * (&dcm / self.a.denom());
        let bb = self.b.numer() * (&dcm / self.b.denom());
        let t = &bb * &bb * BigInt::from(self.d);
        let u = t.sqrt(); // floor √t
        let approx_num = if bb.is_negative() { &aa - &u } else { &aa + &u };
        let mut m = approx_num.div_floor(&dcm);
        // The candidate is within one of the truth; fix up exactly.
        while self.cmp_int(&m) == Ordering::Less {
            m -= 1;
        }
        while self.cmp_int(&(&m + 1)) != Ordering::Less {
            m += 1;
        }
        m
    }

    pub fn ceil_int(&self) -> BigInt {
        -self.neg().floor_int()
    }

    fn cmp_int(&self, m: &BigInt) -> Ordering {
        let shifted = &self.a - BigRational::from_integer(m.clone());
        match sign_of(&shifted, &self.b, self.d) {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// floor(|self| · 10^pow10), used for decimal rendering.
    fn abs_floor_scaled(&self, pow10: u32) -> BigInt {
        let mag = if self.sign() < 0 { self.neg() } else { self.clone() };
        let scale = BigRational::from_integer(BigInt::from(10u32).pow(pow10));
        mag.mul_rat(&scale).floor_int()
    }

    /// Render with `digits` significant decimal digits (round half away from
    /// zero). Exact rationals round exactly; irrational values are computed
    /// with guard digits from an exact scaled floor.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.sign() < 0;
        let mut guard = 12u32;
        loop {
            let scaled = self.abs_floor_scaled(digits as u32 + guard);
            let s = scaled.to_string();
            if scaled.is_zero() || s.len() < digits + 6 {
                // Too small for this scale (leading zeros ate the budget).
                if guard > 4000 {
                    return "0".to_string();
                }
                guard = guard * 2 + 32;
                continue;
            }
            let mut ds: Vec<u8> = s.bytes().map(|c| c - b'0').collect();
            // value = scaled × 10^-(digits+guard) = 0.ds × 10^exp10.
            let mut exp10 = ds.len() as i64 - (digits as i64 + guard as i64);
            if decimal::round_to(&mut ds, digits) {
                exp10 += 1;
            }
            return decimal::format_digits(neg, &ds, exp10);
        }
    }
}

impl PartialEq for Quad {
    fn eq(&self, other: &Quad) -> bool {
        self.sub(other).is_zero()
    }
}

impl Eq for Quad {}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Quad) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Quad {
    fn cmp(&self, other: &Quad) -> Ordering {
        match self.sub(other).sign() {
            s if s < 0 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn folds_perfect_squares() {
        let x = Quad::new(rat(1, 1), rat(2, 1), 9);
        assert!(x.is_rational());
        assert_eq!(x.as_rational().unwrap(), &rat(7, 1));
    }

    #[test]
    fn conjugate_product_is_norm() {
        let x = Quad::new(rat(1, 1), rat(1, 1), 6);
        let y = Quad::new(rat(1, 1), rat(-1, 1), 6);
        let p = x.mul(&y);
        assert_eq!(p.as_rational().unwrap(), &rat(-5, 1));
    }

    #[test]
    fn division_round_trips() {
        let x = Quad::new(rat(3, 7), rat(-2, 5), 294);
        let y = Quad::new(rat(1, 3), rat(4, 1), 294);
        let z = x.div(&y).mul(&y);
        assert_eq!(z, x);
    }

    #[test]
    fn signs_and_order() {
        // 98√6 vs 240: (98)²·6 = 57624 > 57600 = 240², so 98√6 > 240.
        let x = Quad::new(rat(-240, 1), rat(98, 1), 6);
        assert_eq!(x.sign(), 1);
        let y = Quad::new(rat(-241, 1), rat(98, 1), 6);
        assert_eq!(y.sign(), -1);
        assert!(y < x);
    }

    #[test]
    fn floors_and_ceilings() {
        let s6 = Quad::sqrt_d(6); // 2.449...
        assert_eq!(s6.floor_int(), BigInt::from(2));
        assert_eq!(s6.ceil_int(), BigInt::from(3));
        assert_eq!(s6.neg().floor_int(), BigInt::from(-3));
        assert_eq!(s6.neg().ceil_int(), BigInt::from(-2));
        let n = Quad::from_int(5);
        assert_eq!(n.floor_int(), BigInt::from(5));
        assert_eq!(n.ceil_int(), BigInt::from(5));
        // Rational just below an integer.
        let r = Quad::from_rat(rat(-1, 3));
        assert_eq!(r.floor_int(), BigInt::from(-1));
        assert_eq!(r.ceil_int(), BigInt::from(0));
    }

    #[test]
    fn decimal_rendering_of_radicals() {
        // 343 + 98√6 to 45 significant digits.
        let x = Quad::new(rat(343, 1), rat(98, 1), 6);
        assert_eq!(
            x.to_decimal(45),
            "583.049994792751453623333839321177356412662853"
        );
        // Same value expressed over √294 (= 7√6).
        let y = Quad::new(rat(343, 1), rat(14, 1), 294);
        assert_eq!(
            y.to_decimal(45),
            "583.049994792751453623333839321177356412662853"
        );
    }

    #[test]
    fn decimal_rendering_of_rationals() {
        assert_eq!(Quad::from_rat(rat(1, 8)).to_decimal(10), "0.125");
        assert_eq!(Quad::from_rat(rat(-2154556, 1000)).to_decimal(20), "-2154.556");
        assert_eq!(Quad::from_rat(rat(2, 3)).to_decimal(5), "0.66667");
        assert_eq!(Quad::from_int(0).to_decimal(10), "0");
    }

    #[test]
    fn tiny_values_rescale() {
        let x = Quad::from_rat(rat(1, 1_000_000_000_000_000_000));
        assert_eq!(x.to_decimal(3), "1e-18");
    }
}
