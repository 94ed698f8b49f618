//! Smith normal form over the Laurent ring ℚ(i)[z, z⁻¹] and the minor-gcd oracle.

use num_traits::Zero;

use crate::arith::{GaussianRational, LaurentPoly, Rational};
use crate::error::{invalid, Error, Result};
use crate::matrix::LaurentMatrix;

/// Largest dimension accepted by [`determinantal_divisors`].
pub const MINOR_SIZE_CAP: usize = 5;

/// `S·A·T = diag(p₁, …, p_k, 0, …)` with `S`, `T` invertible over the Laurent ring.
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub s: LaurentMatrix,
    pub t: LaurentMatrix,
    /// Exact inverses of `s` and `t`, accumulated alongside them.
    pub s_inv: LaurentMatrix,
    pub t_inv: LaurentMatrix,
    /// Monic, zero-valuation invariant factors with `p_l | p_{l+1}`.
    pub factors: Vec<LaurentPoly>,
}

impl SnfResult {
    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn last_factor(&self) -> Option<&LaurentPoly> {
        self.factors.last()
    }
}

struct Elimination {
    m: LaurentMatrix,
    s: LaurentMatrix,
    s_inv: LaurentMatrix,
    t: LaurentMatrix,
    t_inv: LaurentMatrix,
}

impl Elimination {
    fn rows(&self) -> usize {
        self.m.rows()
    }

    fn cols(&self) -> usize {
        self.m.cols()
    }

    /// row_i += q·row_j
    fn add_row(&mut self, i: usize, j: usize, q: &LaurentPoly) {
        for c in 0..self.cols() {
            let add = q * self.m.get(j, c);
            *self.m.get_mut(i, c) = &*self.m.get(i, c) + &add;
        }
        for c in 0..self.rows() {
            let add = q * self.s.get(j, c);
            *self.s.get_mut(i, c) = &*self.s.get(i, c) + &add;
        }
        for r in 0..self.rows() {
            let sub = self.s_inv.get(r, i) * q;
            *self.s_inv.get_mut(r, j) = &*self.s_inv.get(r, j) - &sub;
        }
    }

    /// col_j += q·col_i
    fn add_col(&mut self, j: usize, i: usize, q: &LaurentPoly) {
        for r in 0..self.rows() {
            let add = self.m.get(r, i) * q;
            *self.m.get_mut(r, j) = &*self.m.get(r, j) + &add;
        }
        for r in 0..self.cols() {
            let add = self.t.get(r, i) * q;
            *self.t.get_mut(r, j) = &*self.t.get(r, j) + &add;
        }
        for c in 0..self.cols() {
            let sub = q * self.t_inv.get(j, c);
            *self.t_inv.get_mut(i, c) = &*self.t_inv.get(i, c) - &sub;
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols() {
            let a = self.m.get(i, c).clone();
            let b = std::mem::replace(self.m.get_mut(j, c), a);
            self.m.set(i, c, b);
        }
        for c in 0..self.rows() {
            let a = self.s.get(i, c).clone();
            let b = std::mem::replace(self.s.get_mut(j, c), a);
            self.s.set(i, c, b);
        }
        for r in 0..self.rows() {
            let a = self.s_inv.get(r, i).clone();
            let b = std::mem::replace(self.s_inv.get_mut(r, j), a);
            self.s_inv.set(r, i, b);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows() {
            let a = self.m.get(r, i).clone();
            let b = std::mem::replace(self.m.get_mut(r, j), a);
            self.m.set(r, i, b);
        }
        for r in 0..self.cols() {
            let a = self.t.get(r, i).clone();
            let b = std::mem::replace(self.t.get_mut(r, j), a);
            self.t.set(r, i, b);
        }
        for c in 0..self.cols() {
            let a = self.t_inv.get(i, c).clone();
            let b = std::mem::replace(self.t_inv.get_mut(j, c), a);
            self.t_inv.set(i, c, b);
        }
    }

    fn scale_row(&mut self, i: usize, u: &LaurentPoly) {
        let u_inv = u.unit_inverse().expect("row scaling by a unit");
        for c in 0..self.cols() {
            *self.m.get_mut(i, c) = self.m.get(i, c) * u;
        }
        for c in 0..self.rows() {
            *self.s.get_mut(i, c) = self.s.get(i, c) * u;
        }
        for r in 0..self.rows() {
            *self.s_inv.get_mut(r, i) = self.s_inv.get(r, i) * &u_inv;
        }
    }

    fn scale_col(&mut self, j: usize, u: &LaurentPoly) {
        let u_inv = u.unit_inverse().expect("column scaling by a unit");
        for r in 0..self.rows() {
            *self.m.get_mut(r, j) = self.m.get(r, j) * u;
        }
        for r in 0..self.cols() {
            *self.t.get_mut(r, j) = self.t.get(r, j) * u;
        }
        for c in 0..self.cols() {
            *self.t_inv.get_mut(j, c) = self.t_inv.get(j, c) * &u_inv;
        }
    }

    /// Nonzero entry of minimal width in the block `[t.., t..]`, ties by lowest (row, col).
    fn find_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..self.rows() {
            for j in t..self.cols() {
                let e = self.m.get(i, j);
                if !e.is_zero() && best.is_none_or(|(w, _, _)| e.width() < w) {
                    best = Some((e.width(), i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    /// Rational and monomial content of a row or column restricted to the active block, as the
    /// unit that clears it.
    fn content_unit<'a>(entries: impl Iterator<Item = &'a LaurentPoly>) -> Option<LaurentPoly> {
        let mut lcm = num_bigint::BigInt::from(1);
        let mut gcd = num_bigint::BigInt::zero();
        let mut minval: Option<i64> = None;
        for p in entries {
            if let Some((l, g)) = p.content_parts() {
                lcm = num_integer::Integer::lcm(&lcm, &l);
                gcd = num_integer::Integer::gcd(&gcd, &g);
                let v = p.valuation().unwrap();
                minval = Some(minval.map_or(v, |m| m.min(v)));
            }
        }
        let minval = minval?;
        let factor = Rational::new(lcm, gcd);
        if factor == Rational::from_integer(1.into()) && minval == 0 {
            return None;
        }
        Some(LaurentPoly::monomial(GaussianRational::real(factor), -minval))
    }

    fn control_content(&mut self, t: usize) {
        for i in t..self.rows() {
            let unit = Self::content_unit((t..self.cols()).map(|j| self.m.get(i, j)));
            if let Some(u) = unit {
                self.scale_row(i, &u);
            }
        }
        for j in t..self.cols() {
            let unit = Self::content_unit((t..self.rows()).map(|i| self.m.get(i, j)));
            if let Some(u) = unit {
                self.scale_col(j, &u);
            }
        }
    }

    /// Clears row and column `t` outside the pivot and makes the pivot divide the remaining block.
    fn reduce_at(&mut self, t: usize) -> Result<()> {
        loop {
            let pivot = self.m.get(t, t).clone();
            let mut residue = false;
            for i in t + 1..self.rows() {
                if self.m.get(i, t).is_zero() {
                    continue;
                }
                let (q, r) = self.m.get(i, t).div_rem_laurent(&pivot)?;
                self.add_row(i, t, &-&q);
                residue |= !r.is_zero();
            }
            for j in t + 1..self.cols() {
                if self.m.get(t, j).is_zero() {
                    continue;
                }
                let (q, r) = self.m.get(t, j).div_rem_laurent(&pivot)?;
                self.add_col(j, t, &-&q);
                residue |= !r.is_zero();
            }
            if residue {
                // A remainder of smaller width now sits in row or column t; move the smallest
                // entry of that cross into the pivot position.
                let mut best = (pivot.width(), t, t);
                for i in t + 1..self.rows() {
                    let e = self.m.get(i, t);
                    if !e.is_zero() && e.width() < best.0 {
                        best = (e.width(), i, t);
                    }
                }
                for j in t + 1..self.cols() {
                    let e = self.m.get(t, j);
                    if !e.is_zero() && e.width() < best.0 {
                        best = (e.width(), t, j);
                    }
                }
                self.swap_rows(t, best.1);
                self.swap_cols(t, best.2);
                continue;
            }
            let offending = (t + 1..self.rows())
                .flat_map(|i| (t + 1..self.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| !pivot.divides(self.m.get(i, j)));
            match offending {
                Some((i, _)) => self.add_row(t, i, &LaurentPoly::one()),
                None => return Ok(()),
            }
        }
    }
}

/// Computes the Smith normal form and verifies it by exact multiplication before returning.
pub fn smith_normal_form(a: &LaurentMatrix) -> Result<SnfResult> {
    let (r, s) = (a.rows(), a.cols());
    let mut el = Elimination {
        m: a.clone(),
        s: LaurentMatrix::identity(r)?,
        s_inv: LaurentMatrix::identity(r)?,
        t: LaurentMatrix::identity(s)?,
        t_inv: LaurentMatrix::identity(s)?,
    };
    let mut factors = Vec::new();
    for t in 0..r.min(s) {
        el.control_content(t);
        let Some((i, j)) = el.find_pivot(t) else {
            break;
        };
        el.swap_rows(t, i);
        el.swap_cols(t, j);
        el.reduce_at(t)?;
        let u = el.m.get(t, t).normalizing_unit().expect("nonzero pivot");
        el.scale_row(t, &u.unit_inverse().expect("unit"));
        factors.push(el.m.get(t, t).clone());
    }
    let result = SnfResult { s: el.s, t: el.t, s_inv: el.s_inv, t_inv: el.t_inv, factors };
    verify(a, &result)?;
    Ok(result)
}

fn verify(a: &LaurentMatrix, snf: &SnfResult) -> Result<()> {
    let (r, s) = (a.rows(), a.cols());
    let d = LaurentMatrix::diagonal(r, s, &snf.factors)?;
    if snf.s.mul(a)?.mul(&snf.t)? != d {
        return Err(Error::Internal("S·A·T is not the claimed diagonal".into()));
    }
    if snf.s.mul(&snf.s_inv)? != LaurentMatrix::identity(r)?
        || snf.t.mul(&snf.t_inv)? != LaurentMatrix::identity(s)?
    {
        return Err(Error::Internal("transformation matrices are not invertible".into()));
    }
    for w in snf.factors.windows(2) {
        if !w[0].divides(&w[1]) {
            return Err(Error::Internal("invariant factors violate the divisibility chain".into()));
        }
    }
    if snf.factors.iter().any(|p| *p != p.monic_normalized()) {
        return Err(Error::Internal("invariant factor not normalized".into()));
    }
    Ok(())
}

/// `d_l` = monic gcd of all `l × l` minors, for `l` up to the rank.
pub fn determinantal_divisors(a: &LaurentMatrix) -> Result<Vec<LaurentPoly>> {
    if a.rows() > MINOR_SIZE_CAP || a.cols() > MINOR_SIZE_CAP {
        return Err(Error::Resource(format!(
            "minor enumeration limited to {MINOR_SIZE_CAP}×{MINOR_SIZE_CAP} matrices"
        )));
    }
    let mut out = Vec::new();
    for l in 1..=a.rows().min(a.cols()) {
        let mut g = LaurentPoly::zero();
        for rows in subsets(a.rows(), l) {
            for cols in subsets(a.cols(), l) {
                let minor = a.submatrix(&rows, &cols).determinant()?;
                if !minor.is_zero() {
                    g = g.gcd(&minor)?;
                }
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(g);
    }
    Ok(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Invariant factors recovered from determinantal divisors, `p_l = d_l / d_{l−1}`.
pub fn factors_from_divisors(d: &[LaurentPoly]) -> Result<Vec<LaurentPoly>> {
    let mut prev = LaurentPoly::one();
    let mut out = Vec::with_capacity(d.len());
    for dl in d {
        let q = dl
            .exact_div(&prev)
            .ok_or_else(|| Error::Internal("determinantal divisors do not form a chain".into()))?;
        out.push(q.monic_normalized());
        prev = dl.clone();
    }
    Ok(out)
}

/// The maximal invariant factor `p_k`.
pub fn last_invariant_factor(a: &LaurentMatrix) -> Result<LaurentPoly> {
    if a.is_zero() {
        return invalid("last invariant factor of the zero matrix");
    }
    let snf = smith_normal_form(a)?;
    Ok(snf.factors.last().cloned().expect("nonzero matrix has rank ≥ 1"))
}
