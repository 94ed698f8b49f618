//! Finite-level spectra of Laurent matrices.
//!
//! The quotient `A_i` at level `i` is block circulant; its singular values are the union over
//! `k = 0..i` of the singular values of the blocks `A(ζ_i^k)`, `ζ_i = e^{2πi/i}`.

use std::collections::HashMap;
use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{dense, LaurentPoly};
use crate::error::{invalid, Error, Result};
use crate::matrix::LaurentMatrix;
use crate::ns::{unit_circle_roots_with, RootConfig};
use crate::precision::{to_f64, HighPrecision, DEFAULT_BITS};
use crate::roots::FactoredPoly;
use crate::smith::{smith_normal_form, SnfResult};

/// Levels at or above this size evaluate blocks on the rayon pool.
const PARALLEL_LEVEL: u64 = 2048;

/// Numeric thresholds for spectra.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Singular values at most `tol_rank · σ_max` count as zero when no exact rank is known.
    pub tol_rank: f64,
    /// Relative width of the cluster defining `m⁺`.
    pub tol_cluster: f64,
    /// Blocks with a retained singular value below this are re-evaluated at extended precision.
    pub escalate_below: f64,
    pub precision_bits: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { tol_rank: 1e-8, tol_cluster: 1e-6, escalate_below: 1e-6, precision_bits: DEFAULT_BITS }
    }
}

/// Qualifiers attached to a sample.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleFlag {
    /// Every block vanishes.
    ZeroQuotient,
    /// `σ⁺` is within `tol_cluster` of 1, so `log σ⁺ ≈ 0`.
    AlphaUndefined,
    /// Some blocks were re-evaluated at extended precision.
    Escalated,
    /// `σ⁺` is exactly nonzero but below `tol_rank · σ_max`; a purely numeric rank would drop it.
    BelowRankTolerance,
    /// Rank decided numerically (no exact invariant factors available).
    NumericRank,
}

impl SampleFlag {
    pub fn label(&self) -> &'static str {
        match self {
            SampleFlag::ZeroQuotient => "zero_quotient",
            SampleFlag::AlphaUndefined => "alpha_undefined",
            SampleFlag::Escalated => "escalated",
            SampleFlag::BelowRankTolerance => "below_rank_tolerance",
            SampleFlag::NumericRank => "numeric_rank",
        }
    }
}

/// `σ⁺`, `m⁺`, rank and alpha number of one finite quotient.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralSample {
    pub level: u64,
    pub group_order: u64,
    /// Smallest positive singular value; 0 for a zero quotient.
    pub sigma_plus: f64,
    pub m_plus: u64,
    pub rank: u64,
    /// `ln(m⁺/group_order) / ln σ⁺`, absent when undefined.
    pub alpha: Option<f64>,
    pub flags: Vec<SampleFlag>,
    pub tol_rank: f64,
    pub tol_cluster: f64,
    /// 53 when everything was computed in double precision.
    pub precision_bits: usize,
}

impl SpectralSample {
    pub fn has_flag(&self, f: SampleFlag) -> bool {
        self.flags.contains(&f)
    }

    /// Alpha number when defined and the quotient is nonzero.
    pub fn usable_alpha(&self) -> Option<f64> {
        self.alpha
    }
}

/// Step spectral distribution function `F(λ) = #{σ_j ≤ λ}/group_order` including the kernel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSdf {
    pub level: u64,
    pub group_order: u64,
    /// `F(0)` = kernel dimension / group order.
    pub base: f64,
    pub kernel_dim: u64,
    /// `(λ_j, F(λ_j))` at each distinct positive singular value, ascending.
    pub jumps: Vec<(f64, f64)>,
    /// Number of rows of the quotient, the value reached by `group_order · F`.
    pub total_dim: u64,
}

impl StepSdf {
    pub fn value_at(&self, lambda: f64) -> f64 {
        if lambda < 0.0 {
            return 0.0;
        }
        self.jumps.iter().rev().find(|(l, _)| *l <= lambda).map_or(self.base, |(_, f)| *f)
    }

    /// Tab-separated `(lambda, F)` rows, starting with `(0, F(0))`.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("lambda\tF\n");
        s.push_str(&format!("0\t{}\n", fmt_f64(self.base)));
        for (l, f) in &self.jumps {
            s.push_str(&format!("{}\t{}\n", fmt_f64(*l), fmt_f64(*f)));
        }
        s
    }
}

/// Shortest representation that round-trips, without a trailing `.0` on integers.
pub fn fmt_f64(x: f64) -> String {
    if x.fract() == 0.0 && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{x}")
    }
}

/// `k·e mod i`, reduced exactly.
fn turn(k: u64, e: i64, i: u64) -> u64 {
    let e = e.rem_euclid(i as i64) as u64;
    match k.checked_mul(e) {
        Some(x) => x % i,
        None => ((k as u128 * e as u128) % i as u128) as u64,
    }
}

fn cis(turn_num: u64, turn_den: u64) -> Complex64 {
    let theta = 2.0 * PI * (turn_num as f64) / (turn_den as f64);
    Complex64::new(theta.cos(), theta.sin())
}

/// Entrywise evaluation of `A` at `ζ_i^k`, with exponents reduced modulo `i` exactly.
pub fn dft_block(a: &LaurentMatrix, k: u64, i: u64) -> DMatrix<Complex64> {
    eval_block(&FloatEntries::new(a), k, i)
}

/// Entries of a Laurent matrix with coefficients converted to doubles once.
#[derive(Clone, Debug)]
struct FloatEntries {
    rows: usize,
    cols: usize,
    terms: Vec<Vec<(i64, Complex64)>>,
}

impl FloatEntries {
    fn new(a: &LaurentMatrix) -> Self {
        let terms = (0..a.rows())
            .flat_map(|r| (0..a.cols()).map(move |c| (r, c)))
            .map(|(r, c)| a.get(r, c).terms().map(|(e, v)| (e, v.to_complex64())).collect())
            .collect();
        Self { rows: a.rows(), cols: a.cols(), terms }
    }
}

fn eval_block(f: &FloatEntries, k: u64, i: u64) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(f.rows, f.cols);
    for r in 0..f.rows {
        for c in 0..f.cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(e, v) in &f.terms[r * f.cols + c] {
                acc += v * cis(turn(k, e, i), i);
            }
            m[(r, c)] = acc;
        }
    }
    m
}

/// All `i` blocks `A(ζ_i^0), …, A(ζ_i^{i−1})`.
pub fn dft_blocks(a: &LaurentMatrix, i: u64) -> Result<Vec<DMatrix<Complex64>>> {
    if i == 0 {
        return invalid("level must be ≥ 1");
    }
    let f = FloatEntries::new(a);
    Ok((0..i).map(|k| eval_block(&f, k, i)).collect())
}

/// Singular values of a small dense matrix, descending.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut v: Vec<f64> = if m.nrows() == 1 && m.ncols() == 1 {
        vec![m[(0, 0)].norm()]
    } else {
        m.clone().svd(false, false).singular_values.iter().copied().collect()
    };
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Explicit block-circulant quotient of size `r·i × s·i`; row `(p, k)` maps to column `(q, l)` with
/// coefficient `Σ_{m ≡ l−k (mod i)} [z^m] A_{pq}`. Intended for cross-checks on small levels.
pub fn dense_quotient(a: &LaurentMatrix, i: u64) -> Result<DMatrix<Complex64>> {
    if i == 0 {
        return invalid("level must be ≥ 1");
    }
    let iu = i as usize;
    let (rows, cols) = (a.rows() * iu, a.cols() * iu);
    if rows.checked_mul(cols).is_none_or(|x| x > crate::groupring::DENSE_ENTRY_CAP) {
        return Err(Error::Resource(format!("dense quotient {rows}×{cols} exceeds the entry cap")));
    }
    let mut out = DMatrix::zeros(rows, cols);
    for p in 0..a.rows() {
        for q in 0..a.cols() {
            for (m, c) in a.get(p, q).terms() {
                let cv = c.to_complex64();
                for k in 0..iu {
                    let l = (k as i64 + m).rem_euclid(i as i64) as usize;
                    out[(p * iu + k, q * iu + l)] += cv;
                }
            }
        }
    }
    Ok(out)
}

/// Number of `i`-th roots of unity annihilating `p`, `deg gcd(p, z^i − 1)`.
pub fn exact_zero_count(p: &LaurentPoly, i: u64) -> Result<u64> {
    if p.is_zero() {
        return invalid("zero count of the zero polynomial");
    }
    let h = dense::gcd_with_z_pow_minus_one(&p.to_dense(), i);
    Ok(dense::degree(&h).unwrap_or(0) as u64)
}

/// Exact rank of the quotient at level `i` from verified invariant factors.
pub fn exact_rank_level(factors: &[LaurentPoly], i: u64) -> Result<u64> {
    let mut rank = factors.len() as u64 * i;
    for p in factors {
        rank -= exact_zero_count(p, i)?;
    }
    Ok(rank)
}

/// Invariant factors together with their exact roots of unity, giving the rank of every block.
#[derive(Clone, Debug)]
pub struct ExactRankData {
    pub factors: Vec<LaurentPoly>,
    /// For each factor, its roots of unity as `(j, m)` meaning `e^{2πi·j/m}`.
    pub roots_of_unity: Vec<Vec<(u64, u64)>>,
}

impl ExactRankData {
    pub fn from_snf(snf: &SnfResult, cfg: &RootConfig) -> Result<Self> {
        let mut roots_of_unity = Vec::with_capacity(snf.factors.len());
        for p in &snf.factors {
            let list = unit_circle_roots_with(p, cfg)?
                .iter()
                .filter_map(|r| Some((r.root_of_unity_index?, r.root_of_unity_order?)))
                .collect();
            roots_of_unity.push(list);
        }
        Ok(Self { factors: snf.factors.clone(), roots_of_unity })
    }

    /// Map from block index `k` to the number of invariant factors vanishing at `ζ_i^k`.
    pub fn vanishing_blocks(&self, i: u64) -> HashMap<u64, usize> {
        let mut out: HashMap<u64, usize> = HashMap::new();
        for list in &self.roots_of_unity {
            for &(j, m) in list {
                if i % m == 0 {
                    *out.entry(j * (i / m)).or_default() += 1;
                }
            }
        }
        out
    }
}

struct BlockResult {
    values: Vec<f64>,
    retained: usize,
}

/// A Laurent matrix prepared for repeated spectral sampling: exact rank data from its Smith
/// normal form and, for square matrices, the factored determinant used by escalation.
#[derive(Clone, Debug)]
pub struct SpectralModel {
    matrix: LaurentMatrix,
    floats: FloatEntries,
    exact: Option<ExactRankData>,
    det: Option<FactoredPoly>,
    tols: Tolerances,
}

impl SpectralModel {
    pub fn new(a: &LaurentMatrix, tols: Tolerances) -> Result<Self> {
        let cfg = RootConfig { precision_bits: tols.precision_bits, ..RootConfig::default() };
        let exact = if a.is_zero() {
            Some(ExactRankData { factors: Vec::new(), roots_of_unity: Vec::new() })
        } else {
            Some(ExactRankData::from_snf(&smith_normal_form(a)?, &cfg)?)
        };
        let mut model = Self::numeric_only(a, tols);
        model.exact = exact;
        if a.rows() == a.cols() {
            let d = a.determinant()?;
            if !d.is_zero() {
                let hp = HighPrecision::new(tols.precision_bits);
                model.det = Some(FactoredPoly::new(&d, &hp)?);
            }
        }
        Ok(model)
    }

    /// A model without exact rank data; ranks are decided by `tol_rank`.
    pub fn numeric_only(a: &LaurentMatrix, tols: Tolerances) -> Self {
        Self { matrix: a.clone(), floats: FloatEntries::new(a), exact: None, det: None, tols }
    }

    pub fn matrix(&self) -> &LaurentMatrix {
        &self.matrix
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tols
    }

    pub fn exact_rank_data(&self) -> Option<&ExactRankData> {
        self.exact.as_ref()
    }

    fn blocks(&self, i: u64) -> Vec<Vec<f64>> {
        let f = &self.floats;
        let eval = |k: u64| {
            if f.rows == 1 && f.cols == 1 {
                let z: Complex64 = f.terms[0]
                    .iter()
                    .map(|&(e, v)| v * cis(turn(k, e, i), i))
                    .sum();
                vec![z.norm()]
            } else {
                singular_values(&eval_block(f, k, i))
            }
        };
        if i >= PARALLEL_LEVEL {
            (0..i).into_par_iter().map(eval).collect()
        } else {
            (0..i).map(eval).collect()
        }
    }

    /// Per-block singular values with the retained (nonzero) prefix decided exactly when possible.
    fn level_blocks(&self, i: u64) -> Result<(Vec<BlockResult>, f64, Vec<SampleFlag>)> {
        if i == 0 {
            return invalid("level must be ≥ 1");
        }
        let raw = self.blocks(i);
        let sigma_max = raw.iter().flat_map(|v| v.first()).fold(0.0f64, |a, &b| a.max(b));
        let threshold = self.tols.tol_rank * sigma_max;
        let mut flags = Vec::new();
        let blocks: Vec<BlockResult> = match &self.exact {
            Some(ex) => {
                let vanishing = ex.vanishing_blocks(i);
                let full = ex.factors.len();
                let mut out = Vec::with_capacity(raw.len());
                for (k, values) in raw.into_iter().enumerate() {
                    let retained = full - vanishing.get(&(k as u64)).copied().unwrap_or(0);
                    if let Some(&bad) = values[retained..].iter().find(|&&x| x > threshold) {
                        return Err(Error::Internal(format!(
                            "rank audit failed at level {i}, block {k}: exactly vanishing singular value evaluates to {bad:e}"
                        )));
                    }
                    out.push(BlockResult { values, retained });
                }
                out
            }
            None => {
                flags.push(SampleFlag::NumericRank);
                raw.into_iter()
                    .map(|values| {
                        let retained = values.iter().take_while(|&&x| x > threshold).count();
                        BlockResult { values, retained }
                    })
                    .collect()
            }
        };
        Ok((blocks, sigma_max, flags))
    }

    /// Replaces the smallest retained singular value of blocks that fall below the escalation
    /// threshold by an extended-precision value from the factored determinant.
    fn escalate(&self, i: u64, blocks: &mut [BlockResult]) -> Result<bool> {
        let Some(det) = &self.det else {
            return Ok(false);
        };
        let r = self.matrix.rows();
        let low = |b: &BlockResult| b.retained == r && b.values[r - 1] < self.tols.escalate_below;
        if !blocks.iter().any(low) {
            return Ok(false);
        }
        let hp = HighPrecision::new(self.tols.precision_bits);
        let mut any = false;
        for (k, b) in blocks.iter_mut().enumerate() {
            if !low(b) {
                continue;
            }
            let z = hp.cis_turns(k as i64, i);
            let abs_det = det.abs_on_circle(&z, &hp);
            let others: f64 = b.values[..r - 1].iter().product();
            let value = to_f64(&abs_det) / others;
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Precision(format!(
                    "extended-precision evaluation at level {i}, block {k} did not resolve a positive singular value"
                )));
            }
            b.values[r - 1] = value;
            any = true;
        }
        Ok(any)
    }

    /// Alpha number and spectral data of the quotient at level `i`.
    pub fn sample(&self, i: u64, group_order: u64) -> Result<SpectralSample> {
        let (mut blocks, sigma_max, mut flags) = self.level_blocks(i)?;
        let mut precision_bits = 53;
        if self.escalate(i, &mut blocks)? {
            flags.push(SampleFlag::Escalated);
            precision_bits = self.tols.precision_bits;
        }
        let rank: u64 = blocks.iter().map(|b| b.retained as u64).sum();
        let retained = blocks.iter().flat_map(|b| b.values[..b.retained].iter().copied());
        let sigma_plus = retained.clone().fold(f64::INFINITY, f64::min);
        let mut sample = SpectralSample {
            level: i,
            group_order,
            sigma_plus: 0.0,
            m_plus: 0,
            rank,
            alpha: None,
            flags: Vec::new(),
            tol_rank: self.tols.tol_rank,
            tol_cluster: self.tols.tol_cluster,
            precision_bits,
        };
        if rank == 0 {
            flags.push(SampleFlag::ZeroQuotient);
            sample.flags = flags;
            return Ok(sample);
        }
        let band = self.tols.tol_cluster * sigma_plus;
        let m_plus = retained.filter(|&x| x - sigma_plus <= band).count() as u64;
        if sigma_plus <= self.tols.tol_rank * sigma_max {
            flags.push(SampleFlag::BelowRankTolerance);
        }
        let alpha = if (sigma_plus - 1.0).abs() <= self.tols.tol_cluster {
            flags.push(SampleFlag::AlphaUndefined);
            None
        } else {
            Some((m_plus as f64 / group_order as f64).ln() / sigma_plus.ln())
        };
        flags.sort();
        flags.dedup();
        sample.sigma_plus = sigma_plus;
        sample.m_plus = m_plus;
        sample.alpha = alpha;
        sample.flags = flags;
        Ok(sample)
    }

    /// Step spectral distribution function at level `i`.
    pub fn sdf(&self, i: u64, group_order: u64) -> Result<StepSdf> {
        let (mut blocks, _, _) = self.level_blocks(i)?;
        self.escalate(i, &mut blocks)?;
        let total_dim = self.matrix.rows() as u64 * i;
        let rank: u64 = blocks.iter().map(|b| b.retained as u64).sum();
        let kernel_dim = total_dim - rank;
        let mut values: Vec<f64> = blocks.iter().flat_map(|b| b.values[..b.retained].iter().copied()).collect();
        values.sort_by(f64::total_cmp);
        let g = group_order as f64;
        let mut jumps: Vec<(f64, f64)> = Vec::new();
        let mut count = kernel_dim;
        let mut idx = 0;
        while idx < values.len() {
            let start = values[idx];
            while idx < values.len() && values[idx] - start <= self.tols.tol_cluster * start {
                idx += 1;
                count += 1;
            }
            jumps.push((start, count as f64 / g));
        }
        Ok(StepSdf { level: i, group_order, base: kernel_dim as f64 / g, kernel_dim, jumps, total_dim })
    }
}

/// One-shot [`SpectralModel::sample`].
pub fn spectral_sample(a: &LaurentMatrix, i: u64, group_order: u64, tols: Tolerances) -> Result<SpectralSample> {
    SpectralModel::new(a, tols)?.sample(i, group_order)
}

/// One-shot [`SpectralModel::sdf`].
pub fn sdf_step(a: &LaurentMatrix, i: u64, group_order: u64, tols: Tolerances) -> Result<StepSdf> {
    SpectralModel::new(a, tols)?.sdf(i, group_order)
}
