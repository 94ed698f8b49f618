//! Numeric roots of polynomials over ℚ(i): companion-matrix eigenvalues in double
//! precision, polished by Aberth–Ehrlich iteration at extended precision.

use astro_float::BigFloat;
use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::arith::dense;
use crate::arith::{GaussianRational, LaurentPoly};
use crate::error::{Error, Result};
use crate::precision::{cmp, to_f64, HighComplex, HighPrecision};

const MAX_POLISH_ITERS: usize = 200;

/// Double-precision roots of a monic polynomial (coefficients lowest power first).
pub(crate) fn initial_roots(monic: &[GaussianRational]) -> Vec<Complex64> {
    let d = monic.len() - 1;
    let c: Vec<Complex64> = monic.iter().map(GaussianRational::to_complex64).collect();
    if d == 1 {
        return vec![-c[0]];
    }
    let mut m = DMatrix::<Complex64>::zeros(d, d);
    for k in 1..d {
        m[(k, k - 1)] = Complex64::one();
    }
    for k in 0..d {
        m[(k, d - 1)] = -c[k];
    }
    let eig = nalgebra::linalg::Schur::try_new(m, 1e-15, 10_000).and_then(|s| s.eigenvalues());
    match eig {
        Some(v) if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) => v.iter().copied().collect(),
        _ => aberth_f64(&c),
    }
}

/// Plain double-precision Aberth iteration from points on a circle; fallback when the
/// eigenvalue solver does not converge.
fn aberth_f64(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let radius = 1.0 + c[..d].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..d {
            let (p, dp) = horner_with_derivative(c, z[k]);
            if p == Complex64::zero() {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..d).filter(|&j| j != k).map(|j| (z[k] - z[j]).inv()).sum();
            let w = ratio / (Complex64::one() - ratio * s);
            z[k] -= w;
            moved = moved.max(w.norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn horner_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

fn horner_high(c: &[HighComplex], x: &HighComplex, hp: &HighPrecision) -> (HighComplex, HighComplex) {
    let mut p = HighComplex::zero(hp);
    let mut dp = HighComplex::zero(hp);
    for a in c.iter().rev() {
        dp = dp.mul(x, hp).add(&p, hp);
        p = p.mul(x, hp).add(a, hp);
    }
    (p, dp)
}

/// All roots of a squarefree polynomial at the precision of `hp`.
///
/// The input is normalized to monic first; constants give an empty list. Linear
/// factors are solved exactly.
pub fn squarefree_roots(q: &LaurentPoly, hp: &HighPrecision) -> Result<Vec<HighComplex>> {
    let monic = dense::make_monic(&q.to_dense());
    if monic.len() <= 1 {
        return Ok(Vec::new());
    }
    if monic.len() == 2 {
        return Ok(vec![HighComplex::from_gaussian(&-monic[0].clone(), hp)]);
    }
    let init = initial_roots(&monic);
    let coeffs: Vec<HighComplex> = monic.iter().map(|c| HighComplex::from_gaussian(c, hp)).collect();
    polish(&coeffs, init, hp)
}

fn polish(c: &[HighComplex], init: Vec<Complex64>, hp: &HighPrecision) -> Result<Vec<HighComplex>> {
    let d = init.len();
    let mut z: Vec<HighComplex> = init.iter().map(|x| HighComplex::from_c64(*x, hp)).collect();
    // Converged once every correction is below 2^-(bits-8) relative.
    let tol = hp.from_f64(2f64.powi(-(hp.bits() as i32 - 8)));
    let one = hp.from_u64(1);
    for _ in 0..MAX_POLISH_ITERS {
        let mut done = true;
        for k in 0..d {
            let (p, dp) = horner_high(c, &z[k], hp);
            if p.is_zero() {
                continue;
            }
            let ratio = p.div(&dp, hp);
            let mut s = HighComplex::zero(hp);
            for j in 0..d {
                if j != k {
                    let diff = z[k].sub(&z[j], hp);
                    if diff.is_zero() {
                        // Coincident iterates: nudge apart and retry on the next sweep.
                        z[k] = z[k].add(&HighComplex::from_c64(Complex64::new(1e-12, 1e-12), hp), hp);
                        done = false;
                        continue;
                    }
                    s = s.add(&HighComplex { re: one.clone(), im: hp.zero() }.div(&diff, hp), hp);
                }
            }
            let denom = HighComplex { re: one.clone(), im: hp.zero() }.sub(&ratio.mul(&s, hp), hp);
            let w = ratio.div(&denom, hp);
            z[k] = z[k].sub(&w, hp);
            let scale = max_big(&one, &z[k].abs(hp));
            if cmp(&w.abs(hp), &hp.mul(&tol, &scale)) == std::cmp::Ordering::Greater {
                done = false;
            }
        }
        if done {
            return Ok(z);
        }
    }
    Err(Error::Precision(format!(
        "root polishing did not converge at {} bits for a degree-{} factor",
        hp.bits(),
        d
    )))
}

fn max_big(a: &BigFloat, b: &BigFloat) -> BigFloat {
    if cmp(a, b) == std::cmp::Ordering::Less {
        b.clone()
    } else {
        a.clone()
    }
}

/// Factored form `p(z) = c·z^v·∏(z − a)^μ` with numerically known roots.
#[derive(Clone, Debug)]
pub struct FactoredPoly {
    pub lead: GaussianRational,
    pub valuation: i64,
    pub roots: Vec<(HighComplex, u32)>,
    pub bits: usize,
}

impl FactoredPoly {
    pub fn new(p: &LaurentPoly, hp: &HighPrecision) -> Result<Self> {
        let Some(lead) = p.leading_coeff().cloned() else {
            return crate::error::invalid("factored form of the zero polynomial");
        };
        let mut roots = Vec::new();
        for (q, mult) in p.squarefree_decomposition()? {
            for r in squarefree_roots(&q, hp)? {
                roots.push((r, mult));
            }
        }
        Ok(Self { lead, valuation: p.valuation().unwrap_or(0), roots, bits: hp.bits() })
    }

    /// `|p(z)|` for `|z| = 1`, as a product of root distances.
    pub fn abs_on_circle(&self, z: &HighComplex, hp: &HighPrecision) -> BigFloat {
        let lead = HighComplex::from_gaussian(&self.lead, hp).abs(hp);
        self.roots.iter().fold(lead, |acc, (a, mult)| {
            let d = z.sub(a, hp).abs(hp);
            let mut f = acc;
            for _ in 0..*mult {
                f = hp.mul(&f, &d);
            }
            f
        })
    }

    /// `|p(e^{2πi·k/n})|` in double precision after an extended-precision product.
    pub fn abs_at_root_of_unity(&self, k: u64, n: u64, hp: &HighPrecision) -> f64 {
        let z = hp.cis_turns(k as i64, n);
        to_f64(&self.abs_on_circle(&z, hp))
    }
}
