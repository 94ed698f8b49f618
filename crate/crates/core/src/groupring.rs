//! Virtually cyclic groups as extensions `1 → Z → G → Q → 1` with `Z = ⟨x⟩` infinite cyclic
//! and normal, their group-ring matrices, and restriction to Laurent matrices over `ℂ[Z]`.
//!
//! Quotient indices are 0-based internally (`0` is the identity); the JSON encoding is 1-based.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{GaussianRational, LaurentPoly};
use crate::error::{invalid, Error, Result};
use crate::matrix::LaurentMatrix;

/// Default cap on the number of entries of a dense quotient matrix.
pub const DENSE_ENTRY_CAP: usize = 4096 * 4096;

/// Window of `k` values used when brute-forcing associativity of the full multiplication.
const ASSOC_WINDOW: i64 = 3;

/// The data `(Q, σ, c)` of an extension of a finite group `Q` by ℤ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VcGroupSpec {
    n: usize,
    q_mult: Vec<Vec<usize>>,
    q_inv: Vec<usize>,
    action: Vec<i64>,
    cocycle: Vec<Vec<i64>>,
}

/// An element `(k, q)` meaning `x^k · g_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub k: i64,
    pub q: usize,
}

impl GroupElement {
    pub fn new(k: i64, q: usize) -> Self {
        Self { k, q }
    }
}

/// Outcome of [`validate_group`]: the list of violated identities (empty when valid).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The JSON form of a group spec, with 1-based quotient indices.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupSpecJson {
    pub n: usize,
    pub q_mult: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_inv: Option<Vec<usize>>,
    pub action: Vec<i64>,
    pub cocycle: Vec<Vec<i64>>,
}

impl VcGroupSpec {
    /// Builds a spec from 0-based tables without validating group axioms; see [`validate_group`].
    /// Shapes and index ranges are checked, and the inversion table is derived from `q_mult`.
    pub fn from_tables(q_mult: Vec<Vec<usize>>, action: Vec<i64>, cocycle: Vec<Vec<i64>>) -> Result<Self> {
        let n = q_mult.len();
        if n == 0 {
            return invalid("group spec needs n ≥ 1");
        }
        if q_mult.iter().any(|r| r.len() != n) || action.len() != n || cocycle.len() != n || cocycle.iter().any(|r| r.len() != n) {
            return invalid("group spec tables have inconsistent sizes");
        }
        if q_mult.iter().flatten().any(|&x| x >= n) {
            return invalid("multiplication table entry out of range");
        }
        if action.iter().any(|&a| a != 1 && a != -1) {
            return invalid("action values must be ±1");
        }
        let q_inv = (0..n)
            .map(|a| (0..n).find(|&b| q_mult[a][b] == 0).unwrap_or(usize::MAX))
            .collect();
        Ok(Self { n, q_mult, q_inv, action, cocycle })
    }

    /// `G = ℤ`.
    pub fn integers() -> Self {
        Self::from_tables(vec![vec![0]], vec![1], vec![vec![0]]).expect("static spec")
    }

    /// Infinite dihedral group `ℤ ⋊ ℤ/2`.
    pub fn infinite_dihedral() -> Self {
        Self::from_tables(vec![vec![0, 1], vec![1, 0]], vec![1, -1], vec![vec![0, 0], vec![0, 0]]).expect("static spec")
    }

    /// `ℤ × ℤ/m`.
    pub fn z_times_cyclic(m: usize) -> Self {
        let q_mult = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        Self::from_tables(q_mult, vec![1; m], vec![vec![0; m]; m]).expect("static spec")
    }

    /// `ℤ` viewed as an index-2 extension of its subgroup `2ℤ` (nontrivial cocycle).
    pub fn integers_over_even() -> Self {
        Self::from_tables(vec![vec![0, 1], vec![1, 0]], vec![1, 1], vec![vec![0, 0], vec![0, 1]]).expect("static spec")
    }

    /// Built-in specs by name: `Z`, `Dinf`, `ZxZ2`, `ZxZ3`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "Z" => Some(Self::integers()),
            "Dinf" => Some(Self::infinite_dihedral()),
            "ZxZ2" => Some(Self::z_times_cyclic(2)),
            "ZxZ3" => Some(Self::z_times_cyclic(3)),
            _ => None,
        }
    }

    pub fn from_json(j: &GroupSpecJson) -> Result<Self> {
        let to0 = |x: usize| -> Result<usize> {
            x.checked_sub(1).ok_or_else(|| Error::Parse("quotient indices are 1-based".into()))
        };
        if j.q_mult.len() != j.n {
            return Err(Error::Parse("q_mult must have n rows".into()));
        }
        let q_mult = j
            .q_mult
            .iter()
            .map(|r| r.iter().map(|&x| to0(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let spec = Self::from_tables(q_mult, j.action.clone(), j.cocycle.clone())
            .map_err(|e| Error::Parse(e.to_string()))?;
        if let Some(inv) = &j.q_inv {
            let inv0 = inv.iter().map(|&x| to0(x)).collect::<Result<Vec<_>>>()?;
            if inv0 != spec.q_inv {
                return Err(Error::Parse("q_inv disagrees with q_mult".into()));
            }
        }
        Ok(spec)
    }

    pub fn to_json(&self) -> GroupSpecJson {
        GroupSpecJson {
            n: self.n,
            q_mult: self.q_mult.iter().map(|r| r.iter().map(|x| x + 1).collect()).collect(),
            q_inv: Some(self.q_inv.iter().map(|x| x + 1).collect()),
            action: self.action.clone(),
            cocycle: self.cocycle.clone(),
        }
    }

    /// Index `[G : Z]`.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q_mul(&self, a: usize, b: usize) -> usize {
        self.q_mult[a][b]
    }

    pub fn q_inv(&self, a: usize) -> usize {
        self.q_inv[a]
    }

    pub fn action(&self, q: usize) -> i64 {
        self.action[q]
    }

    pub fn cocycle(&self, a: usize, b: usize) -> i64 {
        self.cocycle[a][b]
    }

    /// The coset representative `g_u = (0, u)`.
    pub fn representative(&self, u: usize) -> GroupElement {
        GroupElement::new(0, u)
    }
}

/// `(k, q)(k′, q′) = (k + σ_q k′ + c(q, q′), q q′)`.
pub fn group_mul(spec: &VcGroupSpec, a: GroupElement, b: GroupElement) -> GroupElement {
    GroupElement::new(a.k + spec.action(a.q) * b.k + spec.cocycle(a.q, b.q), spec.q_mul(a.q, b.q))
}

/// `(k, q)⁻¹ = (−σ_q(k + c(q, q⁻¹)), q⁻¹)`, solving `(k, q)(k″, q⁻¹) = (0, e)`.
pub fn group_inv(spec: &VcGroupSpec, a: GroupElement) -> GroupElement {
    let qi = spec.q_inv(a.q);
    let k = -spec.action(a.q) * (a.k + spec.cocycle(a.q, qi));
    GroupElement::new(k, qi)
}

/// Checks every group-spec axiom, including associativity of the full multiplication on
/// `k ∈ [−3, 3]`.
pub fn validate_group(spec: &VcGroupSpec) -> ValidationReport {
    let n = spec.n;
    let mut v = Vec::new();
    for a in 0..n {
        if spec.q_mul(0, a) != a || spec.q_mul(a, 0) != a {
            v.push(format!("index 1 is not an identity for quotient element {}", a + 1));
        }
        if spec.q_inv[a] == usize::MAX || spec.q_mul(spec.q_inv[a], a) != 0 {
            v.push(format!("quotient element {} has no two-sided inverse", a + 1));
        }
        if spec.cocycle(0, a) != 0 || spec.cocycle(a, 0) != 0 {
            v.push(format!("cocycle not normalized at (e, {0}) or ({0}, e)", a + 1));
        }
    }
    for a in 0..n {
        for b in 0..n {
            if spec.action(spec.q_mul(a, b)) != spec.action(a) * spec.action(b) {
                v.push(format!("action is not a homomorphism at ({}, {})", a + 1, b + 1));
            }
            for c in 0..n {
                if spec.q_mul(spec.q_mul(a, b), c) != spec.q_mul(a, spec.q_mul(b, c)) {
                    v.push(format!("quotient multiplication not associative at ({}, {}, {})", a + 1, b + 1, c + 1));
                    continue;
                }
                let lhs = spec.action(a) * spec.cocycle(b, c) + spec.cocycle(a, spec.q_mul(b, c));
                let rhs = spec.cocycle(a, b) + spec.cocycle(spec.q_mul(a, b), c);
                if lhs != rhs {
                    v.push(format!("cocycle identity fails at ({}, {}, {})", a + 1, b + 1, c + 1));
                }
            }
        }
    }
    if v.is_empty() {
        let w = || -ASSOC_WINDOW..=ASSOC_WINDOW;
        let mut triples = Vec::new();
        for x in w() {
            for y in w() {
                for z in w() {
                    triples.push((x, y, z));
                }
            }
        }
        'outer: for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for &(ka, kb, kc) in &triples {
                        let (x, y, z) = (GroupElement::new(ka, a), GroupElement::new(kb, b), GroupElement::new(kc, c));
                        if group_mul(spec, group_mul(spec, x, y), z) != group_mul(spec, x, group_mul(spec, y, z)) {
                            v.push(format!("element multiplication not associative at ({x:?}, {y:?}, {z:?})"));
                            break 'outer;
                        }
                    }
                }
            }
        }
    }
    ValidationReport { violations: v }
}

fn require_valid(spec: &VcGroupSpec) -> Result<()> {
    let rep = validate_group(spec);
    if rep.is_valid() {
        Ok(())
    } else {
        invalid(format!("invalid group spec: {}", rep.violations.join("; ")))
    }
}

/// A group-ring element: finitely supported map `G → ℚ(i)`.
pub type GroupRingElement = BTreeMap<GroupElement, GaussianRational>;

/// An `r × s` matrix over `ℚ(i)G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<GroupRingElement>,
}

impl GroupRingMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid("matrix dimensions must be positive");
        }
        Ok(Self { rows, cols, entries: vec![BTreeMap::new(); rows * cols] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for k in 0..n {
            m.add_term(k, k, GroupElement::new(0, 0), GaussianRational::from(1));
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElement {
        &self.entries[i * self.cols + j]
    }

    /// Adds `c·g` to entry `(i, j)`, dropping coefficients that cancel to zero.
    pub fn add_term(&mut self, i: usize, j: usize, g: GroupElement, c: GaussianRational) {
        let e = &mut self.entries[i * self.cols + j];
        let slot = e.entry(g).or_default();
        *slot += &c;
        if slot.is_zero() {
            e.remove(&g);
        }
    }

    /// Checks that every support element has a quotient index below `n`.
    pub fn check_against(&self, spec: &VcGroupSpec) -> Result<()> {
        if self.entries.iter().flat_map(|e| e.keys()).any(|g| g.q >= spec.n()) {
            return invalid("group element quotient index out of range");
        }
        Ok(())
    }

    /// Conjugate transpose: `(Σ λ_g g)* = Σ λ̄_g g⁻¹`.
    pub fn adjoint(&self, spec: &VcGroupSpec) -> Self {
        let mut out = Self { rows: self.cols, cols: self.rows, entries: vec![BTreeMap::new(); self.rows * self.cols] };
        for i in 0..self.rows {
            for j in 0..self.cols {
                for (g, c) in self.get(i, j) {
                    out.add_term(j, i, group_inv(spec, *g), c.conj());
                }
            }
        }
        out
    }

    /// Sum of two matrices of equal shape.
    pub fn add(&self, o: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return invalid("matrix sum dimension mismatch");
        }
        let mut out = self.clone();
        for i in 0..o.rows {
            for j in 0..o.cols {
                for (g, c) in o.get(i, j) {
                    out.add_term(i, j, *g, c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Embeds a Laurent matrix along `Z ≤ G`, `z^m ↦ (m, e)`.
    pub fn from_laurent(a: &LaurentMatrix) -> Self {
        let mut out = Self::zeros(a.rows(), a.cols()).expect("positive dimensions");
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                for (m, c) in a.get(i, j).terms() {
                    out.add_term(i, j, GroupElement::new(m, 0), c.clone());
                }
            }
        }
        out
    }
}

/// Rewrites `A` over `ℂG` as an `rn × sn` matrix over `ℂ[Z]` using representatives `g_u = (0, u)`.
///
/// Entry `(p·n + u, q·n + v)` collects `λ^{pq}_g z^m` for every `g` in the support with
/// `g_u·g = (m, e)·g_v`.
pub fn restrict_to_z(a: &GroupRingMatrix, spec: &VcGroupSpec) -> Result<LaurentMatrix> {
    require_valid(spec)?;
    a.check_against(spec)?;
    let n = spec.n();
    let mut terms: BTreeMap<(usize, usize), Vec<(i64, GaussianRational)>> = BTreeMap::new();
    for p in 0..a.rows() {
        for q in 0..a.cols() {
            for (g, c) in a.get(p, q) {
                for u in 0..n {
                    let h = group_mul(spec, spec.representative(u), *g);
                    let v = h.q;
                    let m = group_mul(spec, h, group_inv(spec, spec.representative(v))).k;
                    terms.entry((p * n + u, q * n + v)).or_default().push((m, c.clone()));
                }
            }
        }
    }
    let mut out = LaurentMatrix::zeros(a.rows() * n, a.cols() * n)?;
    for ((i, j), t) in terms {
        out.set(i, j, LaurentPoly::from_terms(t));
    }
    Ok(out)
}

/// Dense matrix of right multiplication by `A` on `ℂ(G/Z_i)^r → ℂ(G/Z_i)^s`, where
/// `Z_i = ⟨x^i⟩`, with cosets ordered `Z_i h_1 g_1, …, Z_i h_i g_1, …, Z_i h_i g_n`.
///
/// `reps[u]` gives the `Z`-coordinate of representative `g_u`; [`build_quotient_dense`] uses
/// zeros throughout.
pub fn build_quotient_dense_with_reps(
    a: &GroupRingMatrix,
    spec: &VcGroupSpec,
    i: u64,
    reps: &[i64],
) -> Result<DMatrix<Complex64>> {
    require_valid(spec)?;
    a.check_against(spec)?;
    let n = spec.n();
    if i == 0 {
        return invalid("level must be ≥ 1");
    }
    if reps.len() != n {
        return invalid("one representative offset per coset required");
    }
    let i_us = i as usize;
    let (rows, cols) = (a.rows() * n * i_us, a.cols() * n * i_us);
    if rows.checked_mul(cols).is_none_or(|x| x > DENSE_ENTRY_CAP) {
        return Err(Error::Resource(format!("dense quotient {rows}×{cols} exceeds the entry cap")));
    }
    let ii = i as i64;
    // Coset of y: y = (m, v) = (m − σ-twisted offset, e)·g_v; normalize the Z part modulo i.
    let coset_of = |y: GroupElement| -> (usize, usize) {
        let g = GroupElement::new(reps[y.q], y.q);
        let m = group_mul(spec, y, group_inv(spec, g)).k;
        (y.q, m.rem_euclid(ii) as usize)
    };
    let mut out = DMatrix::<Complex64>::zeros(rows, cols);
    for p in 0..a.rows() {
        for q in 0..a.cols() {
            for (g, c) in a.get(p, q) {
                let cv = c.to_complex64();
                for u in 0..n {
                    for k in 0..i_us {
                        let base = group_mul(spec, GroupElement::new(k as i64, 0), GroupElement::new(reps[u], u));
                        let y = group_mul(spec, base, *g);
                        let (v, l) = coset_of(y);
                        out[(p * n * i_us + u * i_us + k, q * n * i_us + v * i_us + l)] += cv;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// [`build_quotient_dense_with_reps`] with representatives `g_u = (0, u)`.
pub fn build_quotient_dense(a: &GroupRingMatrix, spec: &VcGroupSpec, i: u64) -> Result<DMatrix<Complex64>> {
    build_quotient_dense_with_reps(a, spec, i, &vec![0; spec.n()])
}
