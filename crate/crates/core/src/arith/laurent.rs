use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::dense::{self, Dense};
use super::{GaussianRational, Rational};
use crate::error::{invalid, Result};
use crate::precision::{HighComplex, HighPrecision};

/// A Laurent polynomial `Σ c_n zⁿ` over ℚ(i).
///
/// Zero coefficients are never stored; the zero polynomial is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// The indeterminate `z`.
    pub fn z() -> Self {
        Self::monomial(GaussianRational::one(), 1)
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: GaussianRational, exp: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Self { coeffs }
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeated exponents.
    pub fn from_terms<I: IntoIterator<Item = (i64, GaussianRational)>>(terms: I) -> Self {
        let mut coeffs: BTreeMap<i64, GaussianRational> = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_default() += &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { coeffs }
    }

    /// Builds from integer coefficients listed from exponent `valuation` upward.
    pub fn from_int_coeffs(valuation: i64, coeffs: &[i64]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| (valuation + k as i64, GaussianRational::from(c))),
        )
    }

    /// `∏ (z − a)` over the given roots.
    pub fn from_roots(roots: &[GaussianRational]) -> Self {
        roots.iter().fold(Self::one(), |acc, a| {
            &acc * &Self::from_terms([(1, GaussianRational::one()), (0, -a.clone())])
        })
    }

    pub(crate) fn from_dense(valuation: i64, d: &[GaussianRational]) -> Self {
        Self::from_terms(d.iter().enumerate().map(|(k, c)| (valuation + k as i64, c.clone())))
    }

    /// Coefficients of `z^{-valuation}·p` from power 0 up to the width.
    pub(crate) fn to_dense(&self) -> Dense {
        let Some(v) = self.valuation() else {
            return Vec::new();
        };
        let mut out = vec![GaussianRational::zero(); self.width() as usize + 1];
        for (e, c) in &self.coeffs {
            out[(e - v) as usize] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeff(0).is_one()
    }

    /// Units of the Laurent ring are exactly the nonzero monomials `c·z^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1
    }

    pub fn coeff(&self, exp: i64) -> GaussianRational {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `degree − valuation`, the degree after clearing the valuation; 0 for the zero polynomial.
    pub fn width(&self) -> u64 {
        match (self.valuation(), self.degree()) {
            (Some(v), Some(d)) => (d - v) as u64,
            _ => 0,
        }
    }

    pub fn leading_coeff(&self) -> Option<&GaussianRational> {
        self.coeffs.values().next_back()
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect() }
    }

    /// Coefficientwise conjugation without reflecting exponents.
    pub fn conj_coeffs(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.conj())).collect() }
    }

    /// `(Σ c_n zⁿ)* = Σ c̄_n z⁻ⁿ`.
    pub fn involution(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (-e, c.conj())).collect() }
    }

    /// The unit `u = c·z^v` with `self / u` monic of zero valuation.
    pub fn normalizing_unit(&self) -> Option<Self> {
        Some(Self::monomial(self.leading_coeff()?.clone(), self.valuation()?))
    }

    /// Canonical associate: monic with zero valuation. The zero polynomial maps to itself.
    pub fn monic_normalized(&self) -> Self {
        let (Some(v), Some(lc)) = (self.valuation(), self.leading_coeff()) else {
            return Self::zero();
        };
        let inv = lc.inv().expect("nonzero leading coefficient");
        Self { coeffs: self.coeffs.iter().map(|(e, c)| (e - v, c * &inv)).collect() }
    }

    /// Equality up to a unit `c·z^k`.
    pub fn associated(&self, other: &Self) -> bool {
        self.monic_normalized() == other.monic_normalized()
    }

    /// Inverse in the Laurent ring, defined only for units.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (e, c) = self.coeffs.iter().next()?;
        Some(Self::monomial(c.inv()?, -e))
    }

    /// Euclidean division in the Laurent ring with respect to the width:
    /// `self = q·b + r` with `r = 0` or `width(r) < width(b)`.
    pub fn div_rem_laurent(&self, b: &Self) -> Result<(Self, Self)> {
        let (Some(vb), false) = (b.valuation(), b.is_zero()) else {
            return invalid("Laurent division by zero");
        };
        let Some(va) = self.valuation() else {
            return Ok((Self::zero(), Self::zero()));
        };
        let (q0, r0) = dense::div_rem(&self.to_dense(), &b.to_dense());
        Ok((Self::from_dense(va - vb, &q0), Self::from_dense(va, &r0)))
    }

    /// Exact quotient in the Laurent ring, or `None` if `b ∤ self`.
    pub fn exact_div(&self, b: &Self) -> Option<Self> {
        if b.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem_laurent(b).ok()?;
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, a: &Self) -> bool {
        if self.is_zero() {
            return a.is_zero();
        }
        a.exact_div(self).is_some()
    }

    /// Monic zero-valuation greatest common divisor in the Laurent ring.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if self.is_zero() && other.is_zero() {
            return invalid("gcd of two zero polynomials");
        }
        Ok(Self::from_dense(0, &dense::gcd(&self.to_dense(), &other.to_dense())))
    }

    /// Yun's algorithm: pairwise coprime squarefree monic factors with strictly increasing
    /// multiplicities whose product equals `self` up to a unit. Constant factors are omitted.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Self, u32)>> {
        if self.is_zero() {
            return invalid("squarefree decomposition of the zero polynomial");
        }
        let f = dense::make_monic(&self.to_dense());
        let mut out = Vec::new();
        if f.len() <= 1 {
            return Ok(out);
        }
        let df = dense::derivative(&f);
        let a0 = dense::gcd(&f, &df);
        let mut b = dense::exact_div(&f, &a0).expect("gcd divides");
        let mut c = dense::exact_div(&df, &a0).expect("gcd divides");
        let mut d = dense::sub(&c, &dense::derivative(&b));
        let mut mult = 1u32;
        while b.len() > 1 {
            let a = dense::gcd(&b, &d);
            if a.len() > 1 {
                out.push((Self::from_dense(0, &a), mult));
            }
            b = dense::exact_div(&b, &a).expect("gcd divides");
            c = dense::exact_div(&d, &a).expect("gcd divides");
            d = dense::sub(&c, &dense::derivative(&b));
            mult += 1;
        }
        Ok(out)
    }

    /// Monic zero-valuation polynomial whose roots are `1/ā` for the nonzero roots `a` of `self`.
    pub fn reciprocal_conjugate(&self) -> Result<Self> {
        if self.is_zero() {
            return invalid("reciprocal conjugate of the zero polynomial");
        }
        Ok(self.involution().monic_normalized())
    }

    pub fn derivative(&self) -> Self {
        Self::from_terms(
            self.coeffs
                .iter()
                .filter(|(e, _)| **e != 0)
                .map(|(e, c)| (e - 1, c * &GaussianRational::from(*e))),
        )
    }

    /// `p(z)` in double precision by Horner's rule on the valuation-cleared part.
    pub fn eval_complex(&self, z: Complex64) -> Result<Complex64> {
        if z == Complex64::zero() {
            return invalid("evaluation of a Laurent polynomial at 0");
        }
        let Some(v) = self.valuation() else {
            return Ok(Complex64::zero());
        };
        let d = self.to_dense();
        let mut acc = Complex64::zero();
        for c in d.iter().rev() {
            acc = acc * z + c.to_complex64();
        }
        Ok(acc * z.powi(v as i32))
    }

    /// `p(z)` at extended precision.
    pub fn eval_complex_high(&self, z: &HighComplex, hp: &HighPrecision) -> Result<HighComplex> {
        if z.is_zero() {
            return invalid("evaluation of a Laurent polynomial at 0");
        }
        let Some(v) = self.valuation() else {
            return Ok(HighComplex::zero(hp));
        };
        let mut acc = HighComplex::zero(hp);
        for c in self.to_dense().iter().rev() {
            acc = acc.mul(z, hp).add(&HighComplex::from_gaussian(c, hp), hp);
        }
        Ok(acc.mul(&z.powi(v, hp), hp))
    }

    /// Largest coefficient modulus, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.values().map(|c| c.to_complex64().norm()).fold(0.0, f64::max)
    }

    /// Whether all coefficients are real.
    pub fn has_real_coeffs(&self) -> bool {
        self.coeffs.values().all(GaussianRational::is_real)
    }

    /// Rational content used for coefficient-size control: `(lcm of denominators, gcd of numerators)`
    /// over both parts of all coefficients.
    pub(crate) fn content_parts(&self) -> Option<(num_bigint::BigInt, num_bigint::BigInt)> {
        use num_integer::Integer;
        let mut lcm = num_bigint::BigInt::one();
        let mut g = num_bigint::BigInt::zero();
        for c in self.coeffs.values() {
            for part in [&c.re, &c.im] {
                if !part.is_zero() {
                    lcm = lcm.lcm(part.denom());
                    g = g.gcd(part.numer());
                }
            }
        }
        (!g.is_zero()).then_some((lcm, g))
    }
}

impl<'a> Add<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &o.coeffs {
            let entry = coeffs.entry(*e).or_default();
            *entry += c;
            if entry.is_zero() {
                coeffs.remove(e);
            }
        }
        LaurentPoly { coeffs }
    }
}

impl<'a> Sub<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &o.coeffs {
            let entry = coeffs.entry(*e).or_default();
            *entry -= c;
            if entry.is_zero() {
                coeffs.remove(e);
            }
        }
        LaurentPoly { coeffs }
    }
}

impl<'a> Mul<&'a LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs: BTreeMap<i64, GaussianRational> = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                *coeffs.entry(e1 + e2).or_default() += &(c1 * c2);
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs }
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().rev() {
            let neg = c.is_real() && c.re.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = mag.is_one() && *e != 0;
            match (*e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{mag}*z")?,
                (_, true) => write!(f, "z^{e}")?,
                (_, false) => write!(f, "{mag}*z^{e}")?,
            }
        }
        Ok(())
    }
}

/// Convenience constructor for a rational number.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_int_coeffs(v, c)
    }

    #[test]
    fn add_and_mul_examples() {
        assert_eq!(&p(0, &[-1, 1]) + &LaurentPoly::one(), LaurentPoly::z());
        assert_eq!(&LaurentPoly::zero() + &p(0, &[1, 2]), p(0, &[1, 2]));
        assert_eq!(&p(-1, &[1, 0, 1]) + &p(-1, &[-1, 0, 1]), p(1, &[2]));
        assert_eq!(&p(0, &[-1, 1]) * &p(0, &[1, 1]), p(0, &[-1, 0, 1]));
        assert_eq!(&p(-1, &[1]) * &LaurentPoly::z(), LaurentPoly::one());
        assert_eq!(&p(0, &[-1, 1]) * &p(0, &[-1, 1]), p(0, &[1, -2, 1]));
    }

    #[test]
    fn involution_examples() {
        let a = LaurentPoly::from_terms([
            (1, GaussianRational::from_integers(1, 1)),
            (0, GaussianRational::from(2)),
        ]);
        let expect = LaurentPoly::from_terms([
            (0, GaussianRational::from(2)),
            (-1, GaussianRational::from_integers(1, -1)),
        ]);
        assert_eq!(a.involution(), expect);
        assert_eq!(p(0, &[5, -6, 5]).involution(), p(-2, &[5, -6, 5]));
        assert_eq!(LaurentPoly::zero().involution(), LaurentPoly::zero());
    }

    #[test]
    fn gcd_examples() {
        let zm1 = p(0, &[-1, 1]);
        let a = &(&zm1 * &zm1) * &p(0, &[2, 1]);
        let b = &zm1 * &p(0, &[-3, 1]);
        assert_eq!(a.gcd(&b).unwrap(), zm1);
        assert_eq!(p(2, &[4, 2]).gcd(&LaurentPoly::zero()).unwrap(), p(0, &[2, 1]));
        assert_eq!(p(0, &[-1, 0, 1]).gcd(&p(0, &[1, 0, 1])).unwrap(), LaurentPoly::one());
        assert!(LaurentPoly::zero().gcd(&LaurentPoly::zero()).is_err());
    }

    #[test]
    fn squarefree_examples() {
        let zm1 = p(0, &[-1, 1]);
        let a = &(&zm1 * &zm1) * &p(0, &[2, 1]);
        assert_eq!(
            a.squarefree_decomposition().unwrap(),
            vec![(p(0, &[2, 1]), 1), (zm1.clone(), 2)]
        );
        assert_eq!(zm1.squarefree_decomposition().unwrap(), vec![(zm1.clone(), 1)]);
        let z2m1 = p(0, &[-1, 0, 1]);
        assert_eq!((&z2m1 * &z2m1).squarefree_decomposition().unwrap(), vec![(z2m1, 2)]);
        assert!(LaurentPoly::zero().squarefree_decomposition().is_err());
    }

    #[test]
    fn reciprocal_conjugate_examples() {
        let q = p(0, &[5, -6, 5]);
        assert!(q.reciprocal_conjugate().unwrap().associated(&q));
        let r = LaurentPoly::from_terms([
            (1, GaussianRational::one()),
            (0, GaussianRational::real(rat(-1, 2))),
        ]);
        assert_eq!(p(0, &[-2, 1]).reciprocal_conjugate().unwrap(), r);
        assert_eq!(p(0, &[-1, 1]).reciprocal_conjugate().unwrap(), p(0, &[-1, 1]));
    }

    #[test]
    fn eval_examples() {
        let i = Complex64::new(0.0, 1.0);
        let v = p(0, &[-1, 1]).eval_complex(i).unwrap();
        assert!((v - Complex64::new(-1.0, 1.0)).norm() < 1e-15);
        assert!((p(0, &[5, -6, 5]).eval_complex(Complex64::new(1.0, 0.0)).unwrap().re - 4.0).abs() < 1e-15);
        assert_eq!(p(0, &[-1, 1]).eval_complex(Complex64::new(1.0, 0.0)).unwrap(), Complex64::zero());
        assert!(p(0, &[1]).eval_complex(Complex64::zero()).is_err());
    }

    #[test]
    fn laurent_division() {
        let a = p(-2, &[1, 3, 0, 2]);
        let b = p(3, &[1, 1]);
        let (q, r) = a.div_rem_laurent(&b).unwrap();
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.is_zero() || r.width() < b.width());
    }
}
