//! Novikov–Shubin numbers from unit-circle root multiplicities of the maximal invariant factor.

use std::cmp::Ordering;
use std::fmt;

use astro_float::BigFloat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{dense, LaurentPoly};
use crate::error::{invalid, Error, Result};
use crate::groupring::{restrict_to_z, GroupRingMatrix, VcGroupSpec};
use crate::matrix::LaurentMatrix;
use crate::precision::{cmp, to_f64, HighComplex, HighPrecision, DEFAULT_BITS};
use crate::roots::squarefree_roots;
use crate::smith::smith_normal_form;

/// Settings for unit-circle root classification.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootConfig {
    /// Accept a root as on the circle when `| |a| − 1 | ≤ tol_circle`.
    pub tol_circle: f64,
    /// Bits for root polishing.
    pub precision_bits: usize,
    /// Largest root-of-unity order searched; `None` uses `8·d²` for the circle part of degree `d`.
    pub m_max: Option<u64>,
}

impl Default for RootConfig {
    fn default() -> Self {
        Self { tol_circle: 1e-10, precision_bits: DEFAULT_BITS, m_max: None }
    }
}

/// A root of modulus one.
#[derive(Clone, Debug, Serialize)]
pub struct UnitCircleRoot {
    pub approx: Complex64,
    pub multiplicity: u32,
    /// Exact order `m` when the root is an `m`-th root of unity.
    pub root_of_unity_order: Option<u64>,
    /// With `root_of_unity_order = Some(m)`, the root is `e^{2πi·j/m}` for this `j`.
    pub root_of_unity_index: Option<u64>,
    /// Argument in turns, `arg(a)/2π ∈ [0, 1)`.
    pub turns: f64,
    pub precision_bits: usize,
    #[serde(skip)]
    pub high: HighComplex,
    #[serde(skip)]
    pub turns_high: BigFloat,
}

impl UnitCircleRoot {
    pub fn is_root_of_unity(&self) -> bool {
        self.root_of_unity_order.is_some()
    }
}

/// A Novikov–Shubin number: `num/den` or the spectral-gap symbol ∞⁺.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum NsValue {
    Finite { num: u64, den: u64 },
    InfinityPlus,
}

impl NsValue {
    pub fn reciprocal_of(mu: u32) -> Self {
        NsValue::Finite { num: 1, den: mu as u64 }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            NsValue::Finite { num, den } => Some(*num as f64 / *den as f64),
            NsValue::InfinityPlus => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, NsValue::Finite { .. })
    }
}

impl Ord for NsValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NsValue::InfinityPlus, NsValue::InfinityPlus) => Ordering::Equal,
            (NsValue::InfinityPlus, _) => Ordering::Greater,
            (_, NsValue::InfinityPlus) => Ordering::Less,
            (NsValue::Finite { num: a, den: b }, NsValue::Finite { num: c, den: d }) => {
                (*a as u128 * *d as u128).cmp(&(*c as u128 * *b as u128))
            }
        }
    }
}

impl PartialOrd for NsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for NsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NsValue::Finite { num, den: 1 } => write!(f, "{num}"),
            NsValue::Finite { num, den } => write!(f, "{num}/{den}"),
            NsValue::InfinityPlus => write!(f, "∞⁺"),
        }
    }
}

/// Unit-circle roots of `p` with multiplicities and exact root-of-unity orders.
pub fn unit_circle_roots(p: &LaurentPoly) -> Result<Vec<UnitCircleRoot>> {
    unit_circle_roots_with(p, &RootConfig::default())
}

pub fn unit_circle_roots_with(p: &LaurentPoly, cfg: &RootConfig) -> Result<Vec<UnitCircleRoot>> {
    if p.is_zero() {
        return invalid("unit-circle roots of the zero polynomial");
    }
    let hp = HighPrecision::new(cfg.precision_bits);
    let mut out = Vec::new();
    for (q, mult) in p.squarefree_decomposition()? {
        // Roots of g come in pairs (a, 1/ā), so every root of the circle part is either on
        // the circle or paired with a distinct mirror root.
        let g = q.gcd(&q.reciprocal_conjugate()?)?;
        if g.width() == 0 {
            continue;
        }
        let roots = squarefree_roots(&g, &hp)?;
        let mut on_circle = Vec::new();
        for r in roots {
            let dev = (to_f64(&r.abs(&hp)) - 1.0).abs();
            if dev <= cfg.tol_circle {
                on_circle.push(r);
            } else if dev < 10.0 * cfg.tol_circle {
                return Err(Error::Precision(format!(
                    "root modulus deviates from 1 by {dev:e}, inside the ambiguity band; raise the precision"
                )));
            }
        }
        let m_max = cfg.m_max.unwrap_or_else(|| 8 * g.width() * g.width());
        out.extend(classify_roots_of_unity(&g, on_circle, mult, m_max, &hp)?);
    }
    out.sort_by(|a, b| a.turns.partial_cmp(&b.turns).unwrap_or(Ordering::Equal));
    Ok(out)
}

/// Assigns exact root-of-unity orders. Candidate orders come from rational approximations of the
/// root angles; each candidate `m` is confirmed by the exact count of primitive `m`-th roots of
/// unity dividing `g`, obtained from `deg gcd(g, z^d − 1)` over divisors `d | m` by Möbius inversion.
fn classify_roots_of_unity(
    g: &LaurentPoly,
    roots: Vec<HighComplex>,
    mult: u32,
    m_max: u64,
    hp: &HighPrecision,
) -> Result<Vec<UnitCircleRoot>> {
    let gd = g.to_dense();
    let eps = hp.from_f64(2f64.powi(-(hp.bits() as i32 / 2)));
    let mut tagged = Vec::with_capacity(roots.len());
    for r in roots {
        let turns_high = hp.turns(&r);
        let turns = to_f64(&turns_high);
        let mut order = None;
        if let Some((j, m)) = best_rational(turns, m_max) {
            let diff = hp.sub(&turns_high, &hp.div(&hp.from_u64(j), &hp.from_u64(m)));
            if cmp(&diff.abs(), &eps) == Ordering::Less {
                order = Some((j % m, m));
            }
        }
        tagged.push((r, turns_high, turns, order));
    }
    let mut orders: Vec<u64> = tagged.iter().filter_map(|t| t.3.map(|(_, m)| m)).collect();
    orders.sort_unstable();
    orders.dedup();
    for &m in &orders {
        let exact = primitive_count(&gd, m);
        let found = tagged.iter().filter(|t| t.3.is_some_and(|(_, o)| o == m)).count() as u64;
        if exact != found {
            return Err(Error::Precision(format!(
                "{found} numeric roots look like primitive {m}-th roots of unity but exactly {exact} divide the factor"
            )));
        }
    }
    Ok(tagged
        .into_iter()
        .map(|(r, turns_high, turns, order)| UnitCircleRoot {
            approx: r.to_c64(),
            multiplicity: mult,
            root_of_unity_order: order.map(|(_, m)| m),
            root_of_unity_index: order.map(|(j, _)| j),
            turns,
            precision_bits: hp.bits(),
            high: r,
            turns_high,
        })
        .collect())
}

/// Number of primitive `m`-th roots of unity among the roots of `g`.
fn primitive_count(g: &[crate::arith::GaussianRational], m: u64) -> u64 {
    let mut total: i64 = 0;
    for d in 1..=m {
        if m % d != 0 {
            continue;
        }
        let mu = mobius(m / d);
        if mu != 0 {
            let h = dense::gcd_with_z_pow_minus_one(g, d);
            total += mu * dense::degree(&h).unwrap_or(0) as i64;
        }
    }
    total.max(0) as u64
}

fn mobius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// Closest fraction `j/m` to `x ∈ [0, 1)` with `m ≤ m_max`, from the continued fraction of `x`.
fn best_rational(x: f64, m_max: u64) -> Option<(u64, u64)> {
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut y = x;
    let mut best = None;
    for _ in 0..64 {
        let a = y.floor();
        if a > 1e15 {
            break;
        }
        let a = a as u64;
        let (h2, k2) = (a.checked_mul(h1)?.checked_add(h0)?, a.checked_mul(k1)?.checked_add(k0)?);
        if k2 > m_max {
            break;
        }
        best = Some((h2, k2));
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = y - a as f64;
        if f < 1e-14 {
            break;
        }
        y = 1.0 / f;
    }
    best.filter(|&(_, k)| k > 0)
}

/// Maximal multiplicity among unit-circle roots, or `None` when there are none.
pub fn max_circle_multiplicity(roots: &[UnitCircleRoot]) -> Option<u32> {
    roots.iter().map(|r| r.multiplicity).max()
}

/// `1/μ₀` for the largest multiplicity `μ₀` of a unit-circle root; ∞⁺ if there is none or `p = 0`.
pub fn ns_number(p: &LaurentPoly) -> Result<NsValue> {
    ns_number_with(p, &RootConfig::default())
}

pub fn ns_number_with(p: &LaurentPoly, cfg: &RootConfig) -> Result<NsValue> {
    if p.is_zero() {
        return Ok(NsValue::InfinityPlus);
    }
    let roots = unit_circle_roots_with(p, cfg)?;
    Ok(max_circle_multiplicity(&roots).map_or(NsValue::InfinityPlus, NsValue::reciprocal_of))
}

/// Novikov–Shubin number of a Laurent matrix via its maximal invariant factor.
pub fn ns_number_matrix(a: &LaurentMatrix) -> Result<NsValue> {
    if a.is_zero() {
        return Ok(NsValue::InfinityPlus);
    }
    let snf = smith_normal_form(a)?;
    ns_number(snf.last_factor().expect("nonzero matrix"))
}

/// Novikov–Shubin number of a group-ring matrix via restriction to `Z`.
pub fn ns_number_group(a: &GroupRingMatrix, spec: &VcGroupSpec) -> Result<NsValue> {
    ns_number_matrix(&restrict_to_z(a, spec)?)
}

/// Fitted exponent of `t ↦ |p(a·e^{2πit})|` near `t = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthFit {
    pub root: Complex64,
    pub multiplicity: u32,
    pub exponent: f64,
    pub t_range: (f64, f64),
    pub samples: usize,
}

/// Least-squares slope of `ln|p(a·e^{±2πit})|` against `ln t` over log-spaced `t` in `t_range`,
/// for every unit-circle root `a` of `p`, both sides of `a` pooled.
pub fn growth_exponents(p: &LaurentPoly, t_range: (f64, f64), samples: usize) -> Result<Vec<GrowthFit>> {
    if !(t_range.0 > 0.0 && t_range.0 < t_range.1 && t_range.1 < 0.5) || samples < 2 {
        return invalid("growth fit needs 0 < t_lo < t_hi < 1/2 and at least two samples");
    }
    let roots = unit_circle_roots(p)?;
    let hp = HighPrecision::new(DEFAULT_BITS.max(roots.iter().map(|r| r.precision_bits).max().unwrap_or(0)));
    let two_pi = hp.mul(&hp.pi(), &hp.from_u64(2));
    let (lo, hi) = (t_range.0.ln(), t_range.1.ln());
    let mut out = Vec::with_capacity(roots.len());
    for r in &roots {
        let (mut sx, mut sy, mut sxx, mut sxy, mut n) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for j in 0..samples {
            let lt = lo + (hi - lo) * j as f64 / (samples - 1) as f64;
            let theta = hp.mul(&two_pi, &hp.from_f64(lt.exp()));
            for sign in [1.0, -1.0] {
                let rot = HighComplex { re: hp.cos(&theta), im: hp.mul(&hp.from_f64(sign), &hp.sin(&theta)) };
                let v = p.eval_complex_high(&r.high.mul(&rot, &hp), &hp)?;
                let ly = to_f64(&hp.ln(&v.abs(&hp)));
                sx += lt;
                sy += ly;
                sxx += lt * lt;
                sxy += lt * ly;
                n += 1.0;
            }
        }
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out.push(GrowthFit { root: r.approx, multiplicity: r.multiplicity, exponent: slope, t_range, samples });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_int_coeffs(v, c)
    }

    #[test]
    fn counterexample_roots_are_not_roots_of_unity() {
        let roots = unit_circle_roots(&p(0, &[5, -6, 5])).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert_eq!(r.multiplicity, 1);
            assert!(r.root_of_unity_order.is_none());
            assert!((r.approx.re - 0.6).abs() < 1e-15 && (r.approx.im.abs() - 0.8).abs() < 1e-15);
        }
    }

    #[test]
    fn growth_matches_multiplicity() {
        let q = &(&p(0, &[-1, 0, 1]) * &p(0, &[-1, 0, 1])) * &p(0, &[5, -6, 5]);
        for f in growth_exponents(&q, (1e-6, 1e-3), 16).unwrap() {
            assert!((f.exponent - f.multiplicity as f64).abs() < 0.01, "{f:?}");
        }
    }

    #[test]
    fn double_root_at_one() {
        let q = &(&p(0, &[-1, 1]) * &p(0, &[-1, 1])) * &p(0, &[-2, 1]);
        let roots = unit_circle_roots(&q).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 2);
        assert_eq!(roots[0].root_of_unity_order, Some(1));
        assert!(unit_circle_roots(&p(0, &[-2, 1])).unwrap().is_empty());
        assert!(unit_circle_roots(&LaurentPoly::zero()).is_err());
    }

    #[test]
    fn gaussian_roots_of_unity() {
        // z − i has order 4; z² + z + 1 has primitive cube roots; Φ_12 = z⁴ − z² + 1.
        let zi = LaurentPoly::from_terms([
            (1, crate::arith::GaussianRational::from(1)),
            (0, crate::arith::GaussianRational::from_integers(0, -1)),
        ]);
        let r = unit_circle_roots(&zi).unwrap();
        assert_eq!((r[0].root_of_unity_order, r[0].root_of_unity_index), (Some(4), Some(1)));
        let q = &p(0, &[1, 1, 1]) * &p(0, &[1, 0, -1, 0, 1]);
        let mut orders: Vec<u64> = unit_circle_roots(&q).unwrap().iter().map(|r| r.root_of_unity_order.unwrap()).collect();
        orders.sort();
        assert_eq!(orders, vec![3, 3, 12, 12, 12, 12]);
    }

    #[test]
    fn ns_examples() {
        let one = NsValue::reciprocal_of(1);
        assert_eq!(ns_number(&p(0, &[-1, 1])).unwrap(), one);
        assert_eq!(ns_number(&p(0, &[5, -6, 5])).unwrap(), one);
        assert_eq!(ns_number(&p(0, &[1, -2, 1])).unwrap(), NsValue::reciprocal_of(2));
        assert_eq!(ns_number(&p(0, &[-2, 1])).unwrap(), NsValue::InfinityPlus);
        assert_eq!(ns_number(&LaurentPoly::zero()).unwrap(), NsValue::InfinityPlus);
    }

    #[test]
    fn ordering_and_json() {
        assert!(NsValue::reciprocal_of(2) < NsValue::reciprocal_of(1));
        assert!(NsValue::reciprocal_of(1) < NsValue::InfinityPlus);
        assert_eq!(serde_json::to_string(&NsValue::reciprocal_of(2)).unwrap(), r#"{"type":"finite","num":1,"den":2}"#);
        assert_eq!(serde_json::to_string(&NsValue::InfinityPlus).unwrap(), r#"{"type":"infinity_plus"}"#);
    }

    #[test]
    fn mobius_values() {
        let want = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (n, w) in (1..=12).zip(want) {
            assert_eq!(mobius(n), w, "{n}");
        }
    }
}
