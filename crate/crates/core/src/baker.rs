//! Lower bounds from a Baker constant: the circle-runner inequality and the liminf floor.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{rational_to_f64, GaussianRational, Rational};
use crate::error::{invalid, Error, Result};
use crate::nets::{best_approx_records, CounterexampleReport};
use crate::ns::NsValue;
use crate::precision::{cmp, HighPrecision, DEFAULT_BITS};

const MAX_COMPARE_BITS: usize = 8192;

/// Outcome of the circle-runner inequality at one exponent.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleRunnerEntry {
    pub n: u64,
    /// `None` when `a^n = 1`.
    pub passes: Option<bool>,
    pub skipped_root_of_unity: bool,
    /// `|a^n − 1|`.
    pub distance: f64,
    /// `n^{−D}/2`.
    pub bound: f64,
    /// True when both sides were compared as exact rationals.
    pub exact: bool,
    /// Working precision that settled the comparison (0 for exact comparisons).
    pub precision_bits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleRunnerReport {
    pub d: f64,
    pub entries: Vec<CircleRunnerEntry>,
}

impl CircleRunnerReport {
    /// True when no checked exponent violates the inequality.
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passes != Some(false))
    }
}

fn check_circle(a: &GaussianRational) -> Result<()> {
    if a.norm_sqr() != Rational::one() {
        return invalid("circle-runner input needs |a| = 1 exactly");
    }
    if a.is_one() {
        return invalid("circle-runner input needs a ≠ 1");
    }
    Ok(())
}

fn check_d(d: f64) -> Result<()> {
    if !(d.is_finite() && d > 0.0) {
        return invalid(format!("Baker exponent must be a positive real, got {d}"));
    }
    Ok(())
}

fn gauss_pow(a: &GaussianRational, mut n: u64) -> GaussianRational {
    let mut base = a.clone();
    let mut acc = GaussianRational::one();
    while n > 0 {
        if n & 1 == 1 {
            acc = &acc * &base;
        }
        n >>= 1;
        if n > 0 {
            base = &base * &base;
        }
    }
    acc
}

/// Decides `lhs ≥ n^{−2D}/4` for an exact rational `lhs > 0`.
fn compare_with_bound(lhs: &Rational, n: u64, d: f64) -> Result<(bool, bool, usize)> {
    let two_d = 2.0 * d;
    if two_d.fract() == 0.0 && two_d < 1e6 {
        // Exact: lhs · 4 · n^{2D} ≥ 1.
        let e = two_d as u32;
        let scaled = lhs * Rational::from_integer(BigInt::from(4) * BigInt::from(n).pow(e));
        return Ok((scaled >= Rational::one(), true, 0));
    }
    // Compare logarithms: ln lhs against −2D·ln n − 2 ln 2, widening precision until the gap
    // clears the accumulated rounding error.
    let mut bits = DEFAULT_BITS;
    while bits <= MAX_COMPARE_BITS {
        let hp = HighPrecision::new(bits);
        let l = hp.sub(&hp.ln(&hp.from_bigint(lhs.numer())), &hp.ln(&hp.from_bigint(lhs.denom())));
        let ln_n = hp.ln(&hp.from_u64(n));
        let ln2 = hp.ln(&hp.from_u64(2));
        let r = hp.sub(&hp.mul(&hp.from_f64(-two_d), &ln_n), &hp.mul(&hp.from_u64(2), &ln2));
        let gap = hp.sub(&l, &r);
        let scale = crate::precision::to_f64(&l).abs() + crate::precision::to_f64(&r).abs() + 1.0;
        let slack = hp.from_f64(scale * 2f64.powi(-(bits as i32) + 16));
        if cmp(&gap, &slack) == Ordering::Greater {
            return Ok((true, false, bits));
        }
        if cmp(&gap, &hp.sub(&hp.zero(), &slack)) == Ordering::Less {
            return Ok((false, false, bits));
        }
        bits *= 2;
    }
    Err(Error::Precision(format!(
        "circle-runner comparison at n = {n} undecided at {MAX_COMPARE_BITS} bits"
    )))
}

/// Checks `|a^n − 1| ≥ n^{−D}/2` for each `n` in `n_set` with exact left-hand sides.
pub fn circle_runner_check(a: &GaussianRational, d: f64, n_set: &[u64]) -> Result<CircleRunnerReport> {
    check_circle(a)?;
    check_d(d)?;
    let mut entries = Vec::with_capacity(n_set.len());
    for &n in n_set {
        if n < 2 {
            return invalid("circle-runner exponents must be at least 2");
        }
        let an = gauss_pow(a, n);
        let diff = &an - &GaussianRational::one();
        let dist2 = diff.norm_sqr();
        let bound = 0.5 * (n as f64).powf(-d);
        if dist2.is_zero() {
            entries.push(CircleRunnerEntry {
                n,
                passes: None,
                skipped_root_of_unity: true,
                distance: 0.0,
                bound,
                exact: true,
                precision_bits: 0,
            });
            continue;
        }
        let (passes, exact, precision_bits) = compare_with_bound(&dist2, n, d)?;
        entries.push(CircleRunnerEntry {
            n,
            passes: Some(passes),
            skipped_root_of_unity: false,
            distance: rational_to_f64(&dist2).sqrt(),
            bound,
            exact,
            precision_bits,
        });
    }
    Ok(CircleRunnerReport { d, entries })
}

/// Largest `−ln(2|a^n − 1|)/ln n` over best-approximation records `2 ≤ n ≤ n_max`.
pub fn empirical_baker_exponent(a: &GaussianRational, n_max: u64) -> Result<f64> {
    check_circle(a)?;
    if n_max < 2 {
        return invalid("empirical Baker exponent needs n_max ≥ 2");
    }
    let search = best_approx_records(a, 1, n_max)?;
    if let Some(p) = search.period {
        return invalid(format!("a is a root of unity of order {p}"));
    }
    search
        .records
        .iter()
        .filter(|r| r.exponent >= 2)
        .map(|r| -(2.0 * r.float_distance).ln() / (r.exponent as f64).ln())
        .reduce(f64::max)
        .ok_or_else(|| Error::InvalidArgument("no record with exponent ≥ 2 in range".into()))
}

/// The floor `ns/(1 + D)` for the liminf of alpha numbers along a full residual system.
pub fn liminf_floor(ns: &NsValue, d: f64) -> Result<f64> {
    if !(d.is_finite() && d >= 1.0) {
        return invalid(format!("Baker constant must be at least 1, got {d}"));
    }
    match ns {
        NsValue::InfinityPlus => invalid("liminf floor needs a finite Novikov–Shubin number, got ∞⁺"),
        NsValue::Finite { .. } => Ok(ns.as_f64().expect("finite") / (1.0 + d)),
    }
}

/// Baker-constant checks attached to a net report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BakerSummary {
    pub d: f64,
    pub liminf_floor: f64,
    /// Largest empirical exponent over the exact non-root-of-unity roots.
    pub empirical_exponent: Option<f64>,
    /// Circle-runner check at the records `2 ≤ n ≤ n_max` of each exact root.
    pub circle_runner: Vec<CircleRunnerReport>,
    /// Minimum alpha over the report's net window.
    pub min_window_alpha: Option<f64>,
    pub window_above_floor: bool,
}

pub fn baker_summary(report: &CounterexampleReport, d: f64) -> Result<BakerSummary> {
    let floor = liminf_floor(&report.ns, d)?;
    let n_max = report.config.n_max;
    let mut empirical_exponent: Option<f64> = None;
    let mut circle_runner = Vec::new();
    if n_max >= 2 {
        for a in &report.exact_roots {
            let e = empirical_baker_exponent(a, n_max)?;
            empirical_exponent = Some(empirical_exponent.map_or(e, |x| x.max(e)));
            let ns: Vec<u64> =
                best_approx_records(a, 1, n_max)?.records.iter().map(|r| r.exponent).filter(|&n| n >= 2).collect();
            circle_runner.push(circle_runner_check(a, d, &ns)?);
        }
    }
    let min_window_alpha = report.min_alpha();
    Ok(BakerSummary {
        d,
        liminf_floor: floor,
        empirical_exponent,
        circle_runner,
        min_window_alpha,
        window_above_floor: min_window_alpha.is_none_or(|m| m > floor),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a345() -> GaussianRational {
        GaussianRational::from_fractions((3, 5), (4, 5))
    }

    #[test]
    fn root_of_unity_entries_are_skipped() {
        let r = circle_runner_check(&GaussianRational::imaginary_unit(), 2.0, &[4, 5]).unwrap();
        assert!(r.entries[0].skipped_root_of_unity && r.entries[0].passes.is_none());
        assert_eq!(r.entries[1].passes, Some(true));
    }

    #[test]
    fn non_integer_exponent_matches_exact_path() {
        let ns = [6, 7, 27, 61, 332];
        let exact = circle_runner_check(&a345(), 1.0, &ns).unwrap();
        let approx = circle_runner_check(&a345(), 1.0 + 1e-9, &ns).unwrap();
        for (e, f) in exact.entries.iter().zip(&approx.entries) {
            assert!(e.exact && !f.exact);
            assert_eq!(e.passes, f.passes);
        }
    }

    #[test]
    fn small_exponent_fails_somewhere() {
        let r = circle_runner_check(&a345(), 0.1, &[61, 332, 393]).unwrap();
        assert!(!r.all_pass());
    }

    #[test]
    fn floor_values() {
        assert_eq!(liminf_floor(&NsValue::Finite { num: 1, den: 1 }, 3.0).unwrap(), 0.25);
        assert_eq!(liminf_floor(&NsValue::Finite { num: 1, den: 2 }, 1.0).unwrap(), 0.25);
        assert!(liminf_floor(&NsValue::InfinityPlus, 3.0).is_err());
        assert!(liminf_floor(&NsValue::Finite { num: 1, den: 1 }, 0.5).is_err());
    }

    #[test]
    fn exponent_rejects_roots_of_unity() {
        assert!(empirical_baker_exponent(&GaussianRational::imaginary_unit(), 100).is_err());
    }
}
