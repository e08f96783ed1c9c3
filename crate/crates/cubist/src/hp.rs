//! High-precision floating-point context (presentation layer).
//!
//! Exact rationals do all the arithmetic that feeds identities; this module
//! only evaluates and renders real/complex values — roots of unity for the
//! exponential sums, logarithms for diagnostic ratios — at a configurable
//! number of significant decimal digits (50 by default). Binary working
//! precision carries a generous guard over the requested digits so that the
//! printed digits are stable under precision doubling.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::decimal;

/// Extra mantissa bits beyond the requested decimal digits.
const GUARD_BITS: usize = 96;

pub struct Ctx {
    digits: usize,
    prec: usize,
    rm: RoundingMode,
    cc: Consts,
}

impl Ctx {
    pub fn new(digits: usize) -> Self {
        let digits = digits.max(1);
        // log2(10) < 3.322; round the mantissa budget up.
        let prec = digits * 3322 / 1000 + 1 + GUARD_BITS;
        Ctx {
            digits,
            prec,
            rm: RoundingMode::ToEven,
            cc: Consts::new().expect("constants cache"),
        }
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn int(&self, v: i64) -> BigFloat {
        BigFloat::from_i64(v, self.prec)
    }

    pub fn big(&mut self, v: &BigInt) -> BigFloat {
        let bits = v.bits() as usize + 32;
        let p = self.prec.max(bits);
        BigFloat::parse(&v.to_string(), Radix::Dec, p, self.rm, &mut self.cc)
    }

    pub fn rat(&mut self, v: &BigRational) -> BigFloat {
        let n = self.big(v.numer());
        let d = self.big(v.denom());
        n.div(&d, self.prec, self.rm)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.prec, self.rm)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.prec, self.rm)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.prec, self.rm)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.prec, self.rm)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.prec, self.rm)
    }

    pub fn ln(&mut self, a: &BigFloat) -> BigFloat {
        a.ln(self.prec, self.rm, &mut self.cc)
    }

    /// k-th root of a nonnegative value, via x^(1/k).
    pub fn nth_root(&mut self, a: &BigFloat, k: i64) -> BigFloat {
        let exp = self.int(1).div(&self.int(k), self.prec, self.rm);
        a.pow(&exp, self.prec, self.rm, &mut self.cc)
    }

    /// (cos 2πt, sin 2πt) for an exact rational t, reduced mod 1 before any
    /// floating-point work so that huge arguments stay well-conditioned.
    pub fn cos_sin_2pi(&mut self, t: &BigRational) -> (BigFloat, BigFloat) {
        let frac = self.rat(&(t - t.floor()));
        let tau = self.cc.pi(self.prec, self.rm).mul(&self.int(2), self.prec, self.rm);
        let theta = self.mul(&tau, &frac);
        let c = theta.cos(self.prec, self.rm, &mut self.cc);
        let s = theta.sin(self.prec, self.rm, &mut self.cc);
        (c, s)
    }

    /// |a + bi| without intermediate overflow concerns (values are moderate).
    pub fn abs_complex(&self, re: &BigFloat, im: &BigFloat) -> BigFloat {
        let rr = self.mul(re, re);
        let ii = self.mul(im, im);
        self.sqrt(&self.add(&rr, &ii))
    }

    /// Render at the configured number of significant digits.
    pub fn render(&mut self, x: &BigFloat) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let (sign, mut digits, exp10) = x
            .convert_to_radix(Radix::Dec, self.rm, &mut self.cc)
            .expect("finite value");
        let mut e = exp10 as i64;
        if decimal::round_to(&mut digits, self.digits) {
            e += 1;
        }
        decimal::format_digits(sign == Sign::Neg, &digits, e)
    }
}
