//! Net extrema over the divisibility-directed levels, Diophantine record searches, and the
//! counterexample report for polynomials with non-root-of-unity roots on the circle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{ratio_to_f64, GaussianRational, LaurentPoly, Rational};
use crate::error::{invalid, Error, Result};
use crate::matrix::LaurentMatrix;
use crate::ns::{ns_number, unit_circle_roots, unit_circle_roots_with, NsValue, RootConfig, UnitCircleRoot};
use crate::precision::{cmp, to_f64, HighPrecision};
use crate::quotients::{SpectralModel, SpectralSample, Tolerances};

/// Inner extrema over the sampled multiples of one `K`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KExtrema {
    pub inf: f64,
    pub inf_level: u64,
    pub sup: f64,
    pub sup_level: u64,
    pub samples: usize,
}

/// Finite-budget estimates of the net liminf and limsup.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetEstimate {
    /// `max_K inf_{K | j ≤ i_max} x_j`.
    pub liminf_est: f64,
    /// `min_K sup_{K | j ≤ i_max} x_j`.
    pub limsup_est: f64,
    pub liminf_witness: (u64, u64),
    pub limsup_witness: (u64, u64),
    pub per_k: BTreeMap<u64, KExtrema>,
    /// Inf and sup over all usable samples, i.e. the ordinary sequence extrema.
    pub sequence_inf: f64,
    pub sequence_sup: f64,
    pub i_max: u64,
    pub samples_used: usize,
    pub excluded_levels: Vec<u64>,
    pub warnings: Vec<String>,
}

/// Net extrema of `samples` (level → value, `None` for degenerate levels) over `K ∈ k_set`.
pub fn net_extrema(samples: &BTreeMap<u64, Option<f64>>, k_set: &[u64], i_max: u64) -> Result<NetEstimate> {
    if samples.is_empty() {
        return invalid("net extrema need at least one sample");
    }
    if k_set.is_empty() || k_set.contains(&0) {
        return invalid("K set must be nonempty and positive");
    }
    let usable: Vec<(u64, f64)> = samples
        .iter()
        .filter(|(l, _)| **l <= i_max)
        .filter_map(|(l, v)| v.map(|x| (*l, x)))
        .collect();
    let excluded_levels: Vec<u64> = samples.iter().filter(|(l, v)| **l <= i_max && v.is_none()).map(|(l, _)| *l).collect();
    let mut warnings = Vec::new();
    let mut per_k = BTreeMap::new();
    for &k in k_set {
        let mut ext: Option<KExtrema> = None;
        for &(l, x) in usable.iter().filter(|(l, _)| l % k == 0) {
            let e = ext.get_or_insert(KExtrema { inf: x, inf_level: l, sup: x, sup_level: l, samples: 0 });
            e.samples += 1;
            if x < e.inf {
                e.inf = x;
                e.inf_level = l;
            }
            if x > e.sup {
                e.sup = x;
                e.sup_level = l;
            }
        }
        match ext {
            Some(e) => {
                per_k.insert(k, e);
            }
            None => warnings.push(format!("K = {k} skipped: no usable sampled multiple ≤ {i_max}")),
        }
    }
    if per_k.is_empty() {
        return invalid("no K in the K set has a usable sample");
    }
    let (&lk, linf) = per_k.iter().max_by(|a, b| a.1.inf.total_cmp(&b.1.inf).then(b.0.cmp(a.0))).unwrap();
    let (&uk, lsup) = per_k.iter().min_by(|a, b| a.1.sup.total_cmp(&b.1.sup).then(a.0.cmp(b.0))).unwrap();
    let (liminf_est, limsup_est) = (linf.inf, lsup.sup);
    if liminf_est > limsup_est {
        warnings.push(format!(
            "liminf estimate {liminf_est} exceeds limsup estimate {limsup_est}; the sample budget is too small"
        ));
    }
    Ok(NetEstimate {
        liminf_est,
        limsup_est,
        liminf_witness: (lk, linf.inf_level),
        limsup_witness: (uk, lsup.sup_level),
        sequence_inf: usable.iter().map(|x| x.1).fold(f64::INFINITY, f64::min),
        sequence_sup: usable.iter().map(|x| x.1).fold(f64::NEG_INFINITY, f64::max),
        per_k,
        i_max,
        samples_used: usable.len(),
        excluded_levels,
        warnings,
    })
}

/// An exponent `n` at which `|b^n − 1|` is smaller than for every earlier exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxRecord {
    pub exponent: u64,
    /// Exact `|b^n − 1|²`.
    #[serde(skip)]
    pub distance: Rational,
    /// `|b^n − 1|`.
    pub float_distance: f64,
}

/// Output of [`best_approx_records`].
#[derive(Clone, Debug, Serialize)]
pub struct RecordSearch {
    pub k: u64,
    pub n_max: u64,
    pub records: Vec<ApproxRecord>,
    /// Set when `a^{K·p} = 1` exactly; the search stops at `n = p`.
    pub period: Option<u64>,
}

/// Splits a Gaussian rational as `(X + iY)/d` with integers `X`, `Y` and `d > 0`.
fn integral_parts(a: &GaussianRational) -> (BigInt, BigInt, BigInt) {
    let d = a.denominator_lcm();
    let x = (&a.re * Rational::from_integer(d.clone())).to_integer();
    let y = (&a.im * Rational::from_integer(d.clone())).to_integer();
    (x, y, d)
}

/// Best-approximation records of `|a^{Kn} − 1|` for `1 ≤ n ≤ n_max`, by exact powering.
///
/// Since `|a| = 1`, `|a^{Kn} − 1|² = 2 − 2·Re(a^{Kn})`, so records are strict increases of the
/// real part. Candidates are screened in double precision and decided exactly when close.
pub fn best_approx_records(a: &GaussianRational, k: u64, n_max: u64) -> Result<RecordSearch> {
    if a.norm_sqr() != Rational::one() {
        return invalid("best-approximation records need |a| = 1 exactly");
    }
    if *a == GaussianRational::one() {
        return invalid("best-approximation records need a ≠ 1");
    }
    if k == 0 {
        return invalid("K must be positive");
    }
    let (x0, y0, d0) = integral_parts(a);
    let (mut xb, mut yb, mut db) = (BigInt::one(), BigInt::zero(), BigInt::one());
    for _ in 0..k {
        let nx = &xb * &x0 - &yb * &y0;
        let ny = &xb * &y0 + &yb * &x0;
        xb = nx;
        yb = ny;
        db *= &d0;
    }
    let (mut x, mut y, mut d) = (xb.clone(), yb.clone(), db.clone());
    let mut records: Vec<ApproxRecord> = Vec::new();
    let mut best: Option<(BigInt, BigInt, f64)> = None;
    let mut period = None;
    let small_base = xb.bits() <= 62 && yb.bits() <= 62;
    for n in 1..=n_max {
        if n > 1 {
            if small_base {
                let nx = &x * &xb - &y * &yb;
                y = &x * &yb + &y * &xb;
                x = nx;
            } else {
                let (ac, bd) = (&x * &xb, &y * &yb);
                let cross = (&x + &y) * (&xb + &yb);
                y = cross - &ac - &bd;
                x = ac - bd;
            }
            d *= &db;
        }
        let re = ratio_to_f64(&x, &d);
        if re > 1.0 - 1e-12 && y.is_zero() && x == d {
            period = Some(n);
            break;
        }
        let is_record = match &best {
            None => true,
            Some((bx, bd, bre)) => {
                if re > bre + 1e-13 {
                    true
                } else if re < bre - 1e-13 {
                    false
                } else {
                    &x * bd > bx * &d
                }
            }
        };
        if is_record {
            let gap = (&d - &x) * BigInt::from(2);
            let float_sq = ratio_to_f64(&gap, &d);
            records.push(ApproxRecord {
                exponent: n,
                distance: Rational::new(gap, d.clone()),
                float_distance: float_sq.sqrt(),
            });
            best = Some((x.clone(), d.clone(), re));
        }
    }
    Ok(RecordSearch { k, n_max, records, period })
}

/// Record exponents of `‖n·x‖` for `x = frac(K·turns)`, `1 ≤ n ≤ n_max`, from the continued
/// fraction of `x` at the precision of `hp`. Cross-check path for [`best_approx_records`].
pub fn continued_fraction_records(turns: &astro_float::BigFloat, k: u64, n_max: u64, hp: &HighPrecision) -> Vec<u64> {
    let x = hp.frac(&hp.mul(turns, &hp.from_u64(k)));
    let mut candidates = vec![1u64];
    let (mut q0, mut q1) = (0u64, 1u64);
    let mut y = x.clone();
    let tiny = hp.from_f64(2f64.powi(-(hp.bits() as i32 - 16)));
    for _ in 0..200 {
        if cmp(&y, &tiny) == std::cmp::Ordering::Less {
            break;
        }
        let inv = hp.div(&hp.from_u64(1), &y);
        let a = inv.floor();
        let a_f = to_f64(&a);
        if a_f > n_max as f64 {
            break;
        }
        let q2 = (a_f as u64).saturating_mul(q1).saturating_add(q0);
        if q2 > n_max {
            break;
        }
        candidates.push(q2);
        (q0, q1) = (q1, q2);
        y = hp.sub(&inv, &a);
    }
    candidates.sort_unstable();
    candidates.dedup();
    let mut out = Vec::new();
    let mut best: Option<astro_float::BigFloat> = None;
    for q in candidates {
        let dist = hp.dist_to_int(&hp.mul(&x, &hp.from_u64(q)));
        if best.as_ref().is_none_or(|b| cmp(&dist, b) == std::cmp::Ordering::Less) {
            out.push(q);
            best = Some(dist);
        }
    }
    out
}

/// Indices whose scaled distance to the nearest `(K·i)`-th root of unity stays large for every
/// non-root-of-unity root.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatedSearch {
    pub k: u64,
    pub i_range: (u64, u64),
    /// Requested separation threshold.
    pub r_request: f64,
    /// Minimum separation over the returned indices.
    pub r_achieved: f64,
    /// `(i, separation)` for each accepted index, ascending in `i`.
    pub indices: Vec<(u64, f64)>,
    /// True when every root is a root of unity, in which case every index qualifies.
    pub all_roots_of_unity: bool,
}

/// Separation of level `K·i` from a root at angle `l` turns: `‖K·i·l‖`, the angle to the nearest
/// `(K·i)`-th root of unity scaled by `K·i/2π`.
fn separation(turns: f64, level: u64) -> f64 {
    let t = (level as f64 * turns).rem_euclid(1.0);
    t.min(1.0 - t)
}

/// Scans `i ∈ i_range` and keeps those with `min_t ‖K·i·l_t‖ ≥ r_request` over the
/// non-root-of-unity roots.
pub fn separated_index_search(roots: &[UnitCircleRoot], k: u64, i_range: (u64, u64), r_request: f64) -> Result<SeparatedSearch> {
    if k == 0 || i_range.0 == 0 || i_range.0 > i_range.1 {
        return invalid("separated index search needs K ≥ 1 and a nonempty range of positive levels");
    }
    if !(r_request > 0.0 && r_request < 0.5) {
        return invalid("separation threshold must lie in (0, 1/2)");
    }
    let free: Vec<f64> = roots.iter().filter(|r| !r.is_root_of_unity()).map(|r| r.turns).collect();
    let mut indices = Vec::new();
    if free.is_empty() {
        indices = (i_range.0..=i_range.1).map(|i| (i, 0.5)).collect();
    } else {
        for i in i_range.0..=i_range.1 {
            let sep = free.iter().map(|&l| separation(l, k * i)).fold(f64::INFINITY, f64::min);
            if sep >= r_request {
                indices.push((i, sep));
            }
        }
    }
    let r_achieved = if free.is_empty() {
        r_request
    } else {
        indices.iter().map(|x| x.1).fold(f64::INFINITY, f64::min).min(0.5)
    };
    Ok(SeparatedSearch {
        k,
        i_range,
        r_request,
        r_achieved: if indices.is_empty() { 0.0 } else { r_achieved },
        indices,
        all_roots_of_unity: free.is_empty(),
    })
}

/// A log-spaced subfamily of separated indices: around each target `i_lo·10^{t/per_decade}` the
/// index with the smallest separation still above the threshold (ties to the smaller index).
pub fn log_spaced_subfamily(search: &SeparatedSearch, per_decade: u32) -> Vec<u64> {
    let (lo, hi) = search.i_range;
    let ratio = 10f64.powf(1.0 / per_decade as f64);
    let half = ratio.sqrt();
    let mut out = Vec::new();
    let mut t = 0;
    loop {
        let target = lo as f64 * ratio.powi(t);
        if target > hi as f64 * 1.000001 {
            break;
        }
        let (a, b) = (target / half, target * half);
        let pick = search
            .indices
            .iter()
            .filter(|(i, _)| (*i as f64) >= a && (*i as f64) < b)
            .min_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
        if let Some(&(i, _)) = pick {
            out.push(i);
        }
        t += 1;
    }
    out
}

/// Budgets for [`counterexample_report`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CounterexampleConfig {
    pub k_set: Vec<u64>,
    pub n_max: u64,
    /// Largest level at which a sample is computed.
    pub i_max: u64,
    /// Range of `i` (level `K·i`) scanned for separated indices.
    pub separated_range: (u64, u64),
    pub separation: f64,
    pub separated_per_decade: u32,
    /// Points per decade of the background grid of multiples of each `K`.
    pub grid_per_decade: u32,
    /// Samples below this level are reported but left out of the net estimate and the minimum.
    pub net_min_level: u64,
    /// Additional levels to sample.
    pub extra_levels: Vec<u64>,
    pub tolerances: Tolerances,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self {
            k_set: vec![1, 2, 3],
            n_max: 100_000,
            i_max: 300_000,
            separated_range: (1_000, 100_000),
            separation: 0.25,
            separated_per_decade: 4,
            grid_per_decade: 6,
            net_min_level: 1_000,
            extra_levels: Vec::new(),
            tolerances: Tolerances::default(),
        }
    }
}

/// Alpha sample at a record exponent.
#[derive(Clone, Debug, Serialize)]
pub struct RecordSample {
    pub k: u64,
    pub exponent: u64,
    pub level: u64,
    pub float_distance: f64,
    pub alpha: Option<f64>,
}

/// Record table for one `K`.
#[derive(Clone, Debug, Serialize)]
pub struct RecordTable {
    pub k: u64,
    /// `exact` for Gaussian-rational powering, `continued_fraction` for the float path.
    pub method: String,
    pub root: (f64, f64),
    pub period: Option<u64>,
    pub samples: Vec<RecordSample>,
}

/// Alpha sample at a separated index.
#[derive(Clone, Debug, Serialize)]
pub struct SeparatedSample {
    pub k: u64,
    pub i: u64,
    pub level: u64,
    pub separation: f64,
    pub alpha: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeparatedTable {
    pub k: u64,
    pub r_request: f64,
    pub r_achieved: f64,
    pub candidates: usize,
    pub samples: Vec<SeparatedSample>,
}

/// Everything computed by [`counterexample_report`].
#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleReport {
    /// Maximal invariant factor.
    pub polynomial: String,
    pub ns: NsValue,
    pub roots: Vec<UnitCircleRoot>,
    /// Unit-circle roots that are not roots of unity and were recovered as exact Gaussian rationals.
    #[serde(serialize_with = "display_all")]
    pub exact_roots: Vec<GaussianRational>,
    pub flags: Vec<String>,
    pub config: CounterexampleConfig,
    pub records: Vec<RecordTable>,
    pub separated: Vec<SeparatedTable>,
    pub samples: Vec<SpectralSample>,
    pub net_estimate: NetEstimate,
}

impl CounterexampleReport {
    /// `(K, level, alpha)` for every sample at a multiple of some `K`, sorted.
    pub fn alpha_tuples(&self) -> Vec<(u64, u64, f64)> {
        let mut out = Vec::new();
        for &k in &self.config.k_set {
            for s in &self.samples {
                if let (true, Some(a)) = (s.level % k == 0, s.alpha) {
                    out.push((k, s.level, a));
                }
            }
        }
        out
    }

    /// Minimum alpha over usable samples at levels `≥ net_min_level`.
    pub fn min_alpha(&self) -> Option<f64> {
        self.samples.iter().filter(|s| s.level >= self.config.net_min_level).filter_map(|s| s.alpha).reduce(f64::min)
    }
}

fn display_all<S: serde::Serializer>(xs: &[GaussianRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

/// Exact Gaussian-rational root of `p` near `approx`, found by bounded-denominator rational
/// reconstruction of both coordinates and verified by exact evaluation.
fn exact_gaussian_root(p: &LaurentPoly, approx: (f64, f64)) -> Option<GaussianRational> {
    let lead = p.leading_coeff()?.norm_sqr();
    let tail = p.coeff(p.valuation()?).norm_sqr();
    // Denominators of roots of a polynomial with Gaussian-integer coefficients divide the leading
    // coefficient; bound generously from both ends.
    let bound = (crate::arith::rational_to_f64(&lead).max(crate::arith::rational_to_f64(&tail)).sqrt() * 16.0).clamp(16.0, 1e6) as u64;
    let re = reconstruct(approx.0, bound)?;
    let im = reconstruct(approx.1, bound)?;
    let cand = GaussianRational::new(re, im);
    let lin = LaurentPoly::from_terms([(1, GaussianRational::one()), (0, -cand.clone())]);
    lin.divides(p).then_some(cand)
}

fn reconstruct(x: f64, max_den: u64) -> Option<Rational> {
    let neg = x < 0.0;
    let mut y = x.abs();
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    for _ in 0..40 {
        let a = y.floor();
        if a > 1e12 {
            break;
        }
        let a = a as i64;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 as u64 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let f = y - a as f64;
        if f < 1e-13 {
            break;
        }
        y = 1.0 / f;
    }
    if k1 == 0 {
        return None;
    }
    let q = Rational::new(BigInt::from(if neg { -h1 } else { h1 }), BigInt::from(k1));
    ((crate::arith::rational_to_f64(&q) - x).abs() < 1e-12).then_some(q)
}

/// Log-spaced multiples `K·m ≤ i_max` with small `m` always included.
fn background_levels(k: u64, i_max: u64, per_decade: u32) -> Vec<u64> {
    let mut ms: Vec<u64> = (1..=16).collect();
    let top = i_max / k;
    if top == 0 {
        return Vec::new();
    }
    let steps = ((top as f64).log10() * per_decade as f64).ceil() as i32;
    for t in 0..=steps {
        ms.push(10f64.powf(t as f64 / per_decade as f64).round() as u64);
    }
    ms.retain(|&m| m >= 1 && m <= top);
    ms.sort_unstable();
    ms.dedup();
    ms.into_iter().map(|m| m * k).collect()
}

/// Alpha samples at record, separated and background levels for a polynomial with a
/// non-root-of-unity root on the circle, together with the resulting net estimate.
pub fn counterexample_report(p: &LaurentPoly, cfg: &CounterexampleConfig) -> Result<CounterexampleReport> {
    if p.is_zero() {
        return invalid("counterexample report of the zero polynomial");
    }
    if unit_circle_roots(p)?.is_empty() {
        return invalid("polynomial has no roots on the unit circle");
    }
    net_report(&LaurentMatrix::scalar(p.clone()), 1, cfg)
}

/// Net report for a Laurent matrix whose level-`i` quotient has index `index_factor · i`.
///
/// Records and separated indices come from the unit-circle roots of the maximal invariant factor.
/// Fails with a hypothesis error when the Novikov–Shubin number is ∞⁺.
pub fn net_report(a: &LaurentMatrix, index_factor: u64, cfg: &CounterexampleConfig) -> Result<CounterexampleReport> {
    if cfg.k_set.is_empty() || cfg.k_set.contains(&0) {
        return invalid("K set must be nonempty and positive");
    }
    if index_factor == 0 {
        return invalid("index factor must be positive");
    }
    let model = SpectralModel::new(a, cfg.tolerances)?;
    let p = model
        .exact_rank_data()
        .and_then(|d| d.factors.last())
        .cloned()
        .ok_or_else(|| Error::Hypothesis("the zero matrix has Novikov–Shubin number ∞⁺".into()))?;
    let roots = unit_circle_roots(&p)?;
    let ns = ns_number(&p)?;
    if !ns.is_finite() {
        return Err(Error::Hypothesis(format!("Novikov–Shubin number is ∞⁺ (maximal invariant factor {p})")));
    }
    let p = &p;
    let mut flags = Vec::new();
    let mut levels: BTreeMap<u64, ()> = BTreeMap::new();
    for &l in &cfg.extra_levels {
        if l == 0 {
            return invalid("levels must be positive");
        }
        levels.insert(l, ());
    }
    for &k in &cfg.k_set {
        for l in background_levels(k, cfg.i_max, cfg.grid_per_decade) {
            levels.insert(l, ());
        }
    }

    // The root governing σ⁺: largest multiplicity among the non-root-of-unity roots, then smallest angle.
    let free: Vec<&UnitCircleRoot> = roots.iter().filter(|r| !r.is_root_of_unity()).collect();
    let governing = free.iter().copied().max_by(|a, b| a.multiplicity.cmp(&b.multiplicity).then(b.turns.total_cmp(&a.turns)));
    let exact_roots: Vec<GaussianRational> =
        free.iter().filter_map(|r| exact_gaussian_root(p, (r.approx.re, r.approx.im))).collect();
    let mut record_levels: Vec<(u64, u64, u64, f64)> = Vec::new();
    let mut tables_meta = Vec::new();
    match governing {
        None => flags.push("all unit-circle roots are roots of unity".to_string()),
        Some(root) => {
            let exact = exact_gaussian_root(p, (root.approx.re, root.approx.im));
            for &k in &cfg.k_set {
                let (method, exps, period) = match &exact {
                    Some(a) => {
                        let search = best_approx_records(a, k, cfg.n_max)?;
                        let e: Vec<(u64, f64)> = search.records.iter().map(|r| (r.exponent, r.float_distance)).collect();
                        ("exact", e, search.period)
                    }
                    None => {
                        let hp = HighPrecision::new(256);
                        let fine = unit_circle_roots_with(p, &RootConfig { precision_bits: 256, ..RootConfig::default() })?;
                        let turns = fine
                            .iter()
                            .min_by(|a, b| (a.turns - root.turns).abs().total_cmp(&(b.turns - root.turns).abs()))
                            .map(|r| r.turns_high.clone())
                            .ok_or_else(|| Error::Internal("root lost at higher precision".into()))?;
                        let e = continued_fraction_records(&turns, k, cfg.n_max, &hp)
                            .into_iter()
                            .map(|n| {
                                let s = separation(root.turns, k * n);
                                (n, 2.0 * (std::f64::consts::PI * s).sin())
                            })
                            .collect();
                        ("continued_fraction", e, None)
                    }
                };
                for (n, dist) in &exps {
                    record_levels.push((k, *n, k * n, *dist));
                    if k * n <= cfg.i_max {
                        levels.insert(k * n, ());
                    }
                }
                tables_meta.push((k, method.to_string(), (root.approx.re, root.approx.im), period));
            }
        }
    }

    let mut separated_meta = Vec::new();
    for &k in &cfg.k_set {
        let range = (cfg.separated_range.0, cfg.separated_range.1.min(cfg.i_max / k));
        if range.0 > range.1 {
            continue;
        }
        let search = separated_index_search(&roots, k, range, cfg.separation)?;
        let family = log_spaced_subfamily(&search, cfg.separated_per_decade);
        for &i in &family {
            levels.insert(k * i, ());
        }
        separated_meta.push((search, family));
    }

    let level_list: Vec<u64> = levels.keys().copied().collect();
    let samples: Vec<SpectralSample> =
        level_list.par_iter().map(|&l| model.sample(l, l * index_factor)).collect::<Result<_>>()?;
    let by_level: BTreeMap<u64, &SpectralSample> = samples.iter().map(|s| (s.level, s)).collect();

    let records = tables_meta
        .into_iter()
        .map(|(k, method, root, period)| RecordTable {
            k,
            method,
            root,
            period,
            samples: record_levels
                .iter()
                .filter(|r| r.0 == k)
                .map(|&(k, n, level, d)| RecordSample {
                    k,
                    exponent: n,
                    level,
                    float_distance: d,
                    alpha: by_level.get(&level).and_then(|s| s.alpha),
                })
                .collect(),
        })
        .collect();
    let separated = separated_meta
        .into_iter()
        .map(|(search, family)| {
            let sep: BTreeMap<u64, f64> = search.indices.iter().copied().collect();
            SeparatedTable {
                k: search.k,
                r_request: search.r_request,
                r_achieved: search.r_achieved,
                candidates: search.indices.len(),
                samples: family
                    .iter()
                    .map(|&i| SeparatedSample {
                        k: search.k,
                        i,
                        level: search.k * i,
                        separation: sep[&i],
                        alpha: by_level.get(&(search.k * i)).and_then(|s| s.alpha),
                    })
                    .collect(),
            }
        })
        .collect();
    let alpha_map: BTreeMap<u64, Option<f64>> =
        samples.iter().filter(|s| s.level >= cfg.net_min_level).map(|s| (s.level, s.alpha)).collect();
    if alpha_map.is_empty() {
        return invalid(format!("no sampled level reaches the net window start {}", cfg.net_min_level));
    }
    let net_estimate = net_extrema(&alpha_map, &cfg.k_set, cfg.i_max)?;
    Ok(CounterexampleReport {
        polynomial: p.to_string(),
        ns,
        roots,
        exact_roots,
        flags,
        config: cfg.clone(),
        records,
        separated,
        samples,
        net_estimate,
    })
}

/// Whether `values` is strictly decreasing from some index on, returning that index: the
/// smallest `j` such that `values[j..]` is strictly decreasing (always `< len` for nonempty input).
pub fn strictly_decreasing_tail(values: &[f64]) -> Option<usize> {
    if values.is_empty() {
        return None;
    }
    let mut j = values.len() - 1;
    while j > 0 && values[j - 1] > values[j] {
        j -= 1;
    }
    Some(j)
}

/// `gcd` of a list of positive integers.
pub fn gcd_all(xs: &[u64]) -> u64 {
    xs.iter().fold(0, |a, &b| a.gcd(&b))
}
