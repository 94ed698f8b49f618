#![allow(dead_code)]

use std::f64::consts::PI;

use l2alpha::{GaussianRational, LaurentMatrix, LaurentPoly};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Closed form of the alpha number of `z − 1` at level `i ≥ 3`.
pub fn z_minus_one_alpha(i: u64) -> f64 {
    let i = i as f64;
    (2.0 / i).ln() / (2.0 * (PI / i).sin()).ln()
}

/// `(σ⁺, m⁺)` of a 1×1 quotient by evaluating `p` at every `i`-th root of unity in double precision.
pub fn brute_sigma_plus(coeffs: &[f64], i: u64, zero_tol: f64, cluster: f64) -> (f64, u64) {
    let mut vals: Vec<f64> = (0..i)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / i as f64);
            coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c).norm()
        })
        .filter(|v| *v > zero_tol)
        .collect();
    vals.sort_by(f64::total_cmp);
    let s = vals[0];
    (s, vals.iter().filter(|v| **v <= s * (1.0 + cluster)).count() as u64)
}

pub fn alpha_from(sigma: f64, m: u64, order: u64) -> f64 {
    (m as f64 / order as f64).ln() / sigma.ln()
}

fn coeff(c: &GaussianRational) -> Complex64 {
    c.to_complex64()
}

/// Block-circulant quotient: entry `(a, b)` becomes the `i × i` circulant whose `(x, y)` entry is the
/// sum of the coefficients of `z^e` with `x − y ≡ e (mod i)`.
pub fn dense_block_circulant(a: &LaurentMatrix, i: u64) -> DMatrix<Complex64> {
    let n = i as usize;
    let mut m = DMatrix::from_element(a.rows() * n, a.cols() * n, Complex64::new(0.0, 0.0));
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            for (e, v) in a.get(r, c).terms() {
                let sh = e.rem_euclid(i as i64) as usize;
                for y in 0..n {
                    let x = (y + sh) % n;
                    m[(r * n + x, c * n + y)] += coeff(v);
                }
            }
        }
    }
    m
}

pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(f64::total_cmp);
    s
}

/// Largest entrywise gap between two sorted multisets of equal size, relative to the largest value.
pub fn multiset_gap(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multiset sizes differ");
    let scale = a.iter().chain(b).fold(1.0f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

/// A finite quotient `G/iZ` with its multiplication written out by hand.
pub trait FiniteQuotient {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;
    /// Index of the class of `(k, q)`.
    fn class(&self, k: i64, q: usize) -> usize;
}

/// `D∞ / iZ`: elements `x^k t^q`, `t x t = x⁻¹`.
pub struct Dihedral(pub u64);

impl FiniteQuotient for Dihedral {
    fn order(&self) -> usize {
        2 * self.0 as usize
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let i = self.0 as i64;
        let (k1, q1) = ((a / 2) as i64, a % 2);
        let (k2, q2) = ((b / 2) as i64, b % 2);
        let k = if q1 == 1 { k1 - k2 } else { k1 + k2 };
        self.class(k.rem_euclid(i), (q1 + q2) % 2)
    }
    fn class(&self, k: i64, q: usize) -> usize {
        2 * k.rem_euclid(self.0 as i64) as usize + q
    }
}

/// `(Z × Z/m) / iZ`.
pub struct ZxCyclic(pub u64, pub usize);

impl FiniteQuotient for ZxCyclic {
    fn order(&self) -> usize {
        self.0 as usize * self.1
    }
    fn mul(&self, a: usize, b: usize) -> usize {
        let (k1, q1) = ((a / self.1) as i64, a % self.1);
        let (k2, q2) = ((b / self.1) as i64, b % self.1);
        self.class(k1 + k2, (q1 + q2) % self.1)
    }
    fn class(&self, k: i64, q: usize) -> usize {
        k.rem_euclid(self.0 as i64) as usize * self.1 + q
    }
}

/// Right regular representation of a matrix over the group ring on `C[G/iZ]`, with entries given
/// as `(k, q, coefficient)` terms.
pub fn regular_representation<Q: FiniteQuotient>(
    entries: &[Vec<Vec<(i64, usize, Complex64)>>],
    quotient: &Q,
) -> DMatrix<Complex64> {
    let n = quotient.order();
    let (rows, cols) = (entries.len(), entries[0].len());
    let mut m = DMatrix::from_element(rows * n, cols * n, Complex64::new(0.0, 0.0));
    for (r, row) in entries.iter().enumerate() {
        for (c, terms) in row.iter().enumerate() {
            for &(k, q, v) in terms {
                let g = quotient.class(k, q);
                for h in 0..n {
                    m[(r * n + h, c * n + quotient.mul(h, g))] += v;
                }
            }
        }
    }
    m
}

pub fn random_gaussian(rng: &mut ChaCha8Rng, bound: i64) -> GaussianRational {
    let re = rng.gen_range(-bound..=bound);
    let im = if rng.gen_bool(0.3) { rng.gen_range(-bound..=bound) } else { 0 };
    let den = if rng.gen_bool(0.2) { rng.gen_range(2..=3) } else { 1 };
    GaussianRational::from_fractions((re, den), (im, den))
}

pub fn random_laurent(rng: &mut ChaCha8Rng, max_terms: usize, exp_range: (i64, i64), zero_prob: f64) -> LaurentPoly {
    if rng.gen_bool(zero_prob) {
        return LaurentPoly::zero();
    }
    let terms = rng.gen_range(1..=max_terms);
    LaurentPoly::from_terms((0..terms).map(|_| (rng.gen_range(exp_range.0..=exp_range.1), random_gaussian(rng, 3))).fold(
        Vec::new(),
        |mut acc, (e, c)| {
            if !acc.iter().any(|(x, _)| *x == e) {
                acc.push((e, c));
            }
            acc
        },
    ))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> LaurentMatrix {
    let entries = (0..rows).map(|_| (0..cols).map(|_| random_laurent(rng, 3, (-1, 2), 0.2)).collect()).collect();
    LaurentMatrix::from_rows(entries).unwrap()
}
