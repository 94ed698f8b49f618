use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::arith::{GaussianRational, LaurentPoly};
use crate::error::{invalid, Result};

/// An `r × s` matrix over the Laurent ring, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl LaurentMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return invalid("matrix dimensions must be positive");
        }
        Ok(Self { rows, cols, entries: vec![LaurentPoly::zero(); rows * cols] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for k in 0..n {
            m.set(k, k, LaurentPoly::one());
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self> {
        let r = rows.len();
        let s = rows.first().map_or(0, Vec::len);
        if r == 0 || s == 0 {
            return invalid("matrix dimensions must be positive");
        }
        if rows.iter().any(|row| row.len() != s) {
            return invalid("ragged matrix rows");
        }
        Ok(Self { rows: r, cols: s, entries: rows.into_iter().flatten().collect() })
    }

    pub fn scalar(p: LaurentPoly) -> Self {
        Self { rows: 1, cols: 1, entries: vec![p] }
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[LaurentPoly]) -> Result<Self> {
        let mut m = Self::zeros(rows, cols)?;
        for (k, p) in diag.iter().enumerate() {
            m.set(k, k, p.clone());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &LaurentPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: LaurentPoly) {
        self.entries[i * self.cols + j] = p;
    }

    pub(crate) fn get_mut(&mut self, i: usize, j: usize) -> &mut LaurentPoly {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.entries.iter()
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return invalid("matrix product dimension mismatch");
        }
        let mut out = Self::zeros(self.rows, o.cols)?;
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc = LaurentPoly::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), o.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (o.rows, o.cols) {
            return invalid("matrix sum dimension mismatch");
        }
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect();
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|p| p.scale(c)).collect() }
    }

    /// Conjugate transpose under the ring involution.
    pub fn adjoint(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).involution());
            }
        }
        Self { rows: self.cols, cols: self.rows, entries }
    }

    /// Permutes rows so that new row `k` is old row `perm[k]`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        let mut out = self.clone();
        for (k, &p) in perm.iter().enumerate() {
            for j in 0..self.cols {
                out.set(k, j, self.get(p, j).clone());
            }
        }
        out
    }

    /// Permutes columns so that new column `k` is old column `perm[k]`.
    pub fn permute_cols(&self, perm: &[usize]) -> Self {
        let mut out = self.clone();
        for (k, &p) in perm.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, self.get(i, p).clone());
            }
        }
        out
    }

    /// Submatrix on the given row and column index sets.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        Self { rows: rows.len(), cols: cols.len(), entries }
    }

    /// Determinant by cofactor expansion along the first row; square matrices only.
    pub fn determinant(&self) -> Result<LaurentPoly> {
        if self.rows != self.cols {
            return invalid("determinant of a non-square matrix");
        }
        let idx: Vec<usize> = (0..self.cols).collect();
        Ok(self.det_rec(&(0..self.rows).collect::<Vec<_>>(), &idx))
    }

    fn det_rec(&self, rows: &[usize], cols: &[usize]) -> LaurentPoly {
        if rows.len() == 1 {
            return self.get(rows[0], cols[0]).clone();
        }
        let mut acc = LaurentPoly::zero();
        for (k, &c) in cols.iter().enumerate() {
            let a = self.get(rows[0], c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a * &self.det_rec(&rows[1..], &rest);
            acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    /// Entrywise evaluation at a nonzero complex point.
    pub fn eval(&self, z: Complex64) -> Result<DMatrix<Complex64>> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.get(i, j).eval_complex(z)?;
            }
        }
        Ok(m)
    }

    pub fn max_width(&self) -> u64 {
        self.entries.iter().map(LaurentPoly::width).max().unwrap_or(0)
    }

    /// Whether the matrix is 1×1.
    pub fn is_scalar(&self) -> bool {
        self.rows == 1 && self.cols == 1
    }
}

impl fmt::Display for LaurentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: i64, c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_int_coeffs(v, c)
    }

    #[test]
    fn determinant_and_adjoint() {
        let m = LaurentMatrix::from_rows(vec![vec![p(1, &[1]), p(0, &[1])], vec![p(0, &[1]), p(1, &[1])]]).unwrap();
        assert_eq!(m.determinant().unwrap(), p(0, &[-1, 0, 1]));
        let adj = m.adjoint();
        assert_eq!(adj.get(0, 0), &p(-1, &[1]));
        assert_eq!(adj.adjoint(), m);
        let prod = m.mul(&LaurentMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(prod, m);
    }
}
