//! Extended-precision real and complex floats on top of `astro-float`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::arith::{GaussianRational, Rational};

pub const DEFAULT_BITS: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

/// Working context for extended-precision arithmetic at a fixed bit count.
pub struct HighPrecision {
    bits: usize,
    consts: RefCell<Consts>,
}

impl fmt::Debug for HighPrecision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HighPrecision").field("bits", &self.bits).finish()
    }
}

impl HighPrecision {
    pub fn new(bits: usize) -> Self {
        let bits = bits.max(64);
        Self { bits, consts: RefCell::new(Consts::new().expect("astro-float constants")) }
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn zero(&self) -> BigFloat {
        BigFloat::from_word(0, self.bits)
    }

    pub fn from_f64(&self, x: f64) -> BigFloat {
        BigFloat::from_f64(x, self.bits)
    }

    pub fn from_i64(&self, x: i64) -> BigFloat {
        BigFloat::from_i64(x, self.bits)
    }

    pub fn from_u64(&self, x: u64) -> BigFloat {
        BigFloat::from_u64(x, self.bits)
    }

    /// Nearest value to a big integer; only the leading words are read.
    pub fn from_bigint(&self, x: &BigInt) -> BigFloat {
        if x.is_zero() {
            return self.zero();
        }
        let words: Vec<u64> = x.magnitude().iter_u64_digits().collect();
        let keep = self.bits / 64 + 2;
        let start = words.len().saturating_sub(keep);
        let sign = if x.is_negative() { Sign::Neg } else { Sign::Pos };
        let e = (64 * words.len()) as i32;
        let mut v = BigFloat::from_words(&words[start..], sign, e);
        v.set_precision(self.bits, RM).expect("precision change");
        v
    }

    pub fn from_rational(&self, q: &Rational) -> BigFloat {
        let n = self.from_bigint(q.numer());
        let d = self.from_bigint(q.denom());
        n.div(&d, self.bits, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn ln(&self, a: &BigFloat) -> BigFloat {
        a.ln(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn sin(&self, a: &BigFloat) -> BigFloat {
        a.sin(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn cos(&self, a: &BigFloat) -> BigFloat {
        a.cos(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn atan(&self, a: &BigFloat) -> BigFloat {
        a.atan(self.bits, RM, &mut self.consts.borrow_mut())
    }

    pub fn pi(&self) -> BigFloat {
        self.consts.borrow_mut().pi(self.bits, RM)
    }

    /// Fractional part in `[0, 1)`.
    pub fn frac(&self, a: &BigFloat) -> BigFloat {
        let f = a.sub(&a.floor(), self.bits, RM);
        if f.cmp(&self.from_u64(1)) == Some(0) {
            self.zero()
        } else {
            f
        }
    }

    /// Distance to the nearest integer, `‖a‖ ∈ [0, 1/2]`.
    pub fn dist_to_int(&self, a: &BigFloat) -> BigFloat {
        let f = self.frac(a);
        let g = self.from_u64(1).sub(&f, self.bits, RM);
        if cmp(&f, &g) == Ordering::Greater {
            g
        } else {
            f
        }
    }

    /// `e^{2πi·num/den}`, with `num` reduced modulo `den` exactly first.
    pub fn cis_turns(&self, num: i64, den: u64) -> HighComplex {
        let r = num.rem_euclid(den as i64);
        let two_pi = self.mul(&self.pi(), &self.from_u64(2));
        let theta = self.div(&self.mul(&two_pi, &self.from_i64(r)), &self.from_u64(den));
        HighComplex { re: self.cos(&theta), im: self.sin(&theta) }
    }

    /// Angle of `z` in turns, in `[0, 1)`.
    pub fn turns(&self, z: &HighComplex) -> BigFloat {
        let pi = self.pi();
        let (x, y) = (&z.re, &z.im);
        let angle = if x.is_zero() {
            let q = self.div(&pi, &self.from_u64(2));
            if y.is_negative() {
                q.neg()
            } else {
                q
            }
        } else {
            let base = self.atan(&self.div(y, x));
            if x.is_negative() {
                if y.is_negative() {
                    self.sub(&base, &pi)
                } else {
                    self.add(&base, &pi)
                }
            } else {
                base
            }
        };
        let t = self.div(&angle, &self.mul(&pi, &self.from_u64(2)));
        let t = if t.is_negative() { self.add(&t, &self.from_u64(1)) } else { t };
        self.frac(&t)
    }
}

/// Total order on non-NaN floats.
pub fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(x) if x < 0 => Ordering::Less,
        Some(0) => Ordering::Equal,
        _ => Ordering::Greater,
    }
}

/// Nearest `f64` (truncating below the top word).
pub fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((m, _, sign, e, _)) = x.as_raw_parts() else {
        return f64::NAN;
    };
    let top = *m.last().unwrap_or(&0);
    let next = if m.len() >= 2 { m[m.len() - 2] } else { 0 };
    let v = top as f64 + next as f64 * 2f64.powi(-64);
    let v = crate::arith::ldexp(v, e as i64 - 64);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Extended-precision complex number.
#[derive(Clone, Debug)]
pub struct HighComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl HighComplex {
    pub fn zero(hp: &HighPrecision) -> Self {
        Self { re: hp.zero(), im: hp.zero() }
    }

    pub fn from_c64(z: Complex64, hp: &HighPrecision) -> Self {
        Self { re: hp.from_f64(z.re), im: hp.from_f64(z.im) }
    }

    pub fn from_gaussian(c: &GaussianRational, hp: &HighPrecision) -> Self {
        Self { re: hp.from_rational(&c.re), im: hp.from_rational(&c.im) }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, hp: &HighPrecision) -> Self {
        Self { re: hp.add(&self.re, &o.re), im: hp.add(&self.im, &o.im) }
    }

    pub fn sub(&self, o: &Self, hp: &HighPrecision) -> Self {
        Self { re: hp.sub(&self.re, &o.re), im: hp.sub(&self.im, &o.im) }
    }

    pub fn mul(&self, o: &Self, hp: &HighPrecision) -> Self {
        let rr = hp.mul(&self.re, &o.re);
        let ii = hp.mul(&self.im, &o.im);
        let ri = hp.mul(&self.re, &o.im);
        let ir = hp.mul(&self.im, &o.re);
        Self { re: hp.sub(&rr, &ii), im: hp.add(&ri, &ir) }
    }

    pub fn scale(&self, s: &BigFloat, hp: &HighPrecision) -> Self {
        Self { re: hp.mul(&self.re, s), im: hp.mul(&self.im, s) }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn norm_sqr(&self, hp: &HighPrecision) -> BigFloat {
        hp.add(&hp.mul(&self.re, &self.re), &hp.mul(&self.im, &self.im))
    }

    pub fn abs(&self, hp: &HighPrecision) -> BigFloat {
        hp.sqrt(&self.norm_sqr(hp))
    }

    pub fn div(&self, o: &Self, hp: &HighPrecision) -> Self {
        let n = o.norm_sqr(hp);
        let num = self.mul(&o.conj(), hp);
        Self { re: hp.div(&num.re, &n), im: hp.div(&num.im, &n) }
    }

    pub fn powi(&self, e: i64, hp: &HighPrecision) -> Self {
        let mut base = if e < 0 {
            Self { re: hp.from_u64(1), im: hp.zero() }.div(self, hp)
        } else {
            self.clone()
        };
        let mut n = e.unsigned_abs();
        let mut acc = Self { re: hp.from_u64(1), im: hp.zero() };
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base, hp);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base, hp);
            }
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_round_trip() {
        let hp = HighPrecision::new(128);
        for x in [0.75, -3.5, 1e-300, 12345.678, 1e300] {
            assert_eq!(to_f64(&hp.from_f64(x)), x);
        }
        let big = num_traits::pow(BigInt::from(5), 500);
        let v = hp.from_bigint(&big);
        let l = to_f64(&hp.ln(&v));
        assert!((l - 500.0 * 5f64.ln()).abs() < 1e-10);
        let q = Rational::new(BigInt::from(-1), BigInt::from(3));
        assert!((to_f64(&hp.from_rational(&q)) + 1.0 / 3.0).abs() < 1e-17);
    }

    #[test]
    fn turns_of_quadrants() {
        let hp = HighPrecision::new(128);
        for (x, y, t) in [(1.0, 0.0, 0.0), (0.0, 1.0, 0.25), (-1.0, 0.0, 0.5), (0.0, -1.0, 0.75), (1.0, -1.0, 0.875)] {
            let z = HighComplex::from_c64(Complex64::new(x, y), &hp);
            assert!((to_f64(&hp.turns(&z)) - t).abs() < 1e-16, "{x} {y}");
        }
        let c = hp.cis_turns(7, 8).to_c64();
        assert!((c - Complex64::new(0.5f64.sqrt(), -(0.5f64.sqrt()))).norm() < 1e-16);
    }
}
