//! Dense matrices over a ring — the shared language for presentations,
//! relation matrices and module maps.
//!
//! Matrices are stored row-major with explicit shape, so zero-row and
//! zero-column matrices (which arise constantly as degenerate presentations)
//! are first-class values.

use crate::error::{Error, Result};
use crate::kernel::ring::{Ring, RingElement};
use std::fmt;

/// A dense `rows x cols` matrix over a fixed ring.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<RingElement>,
}

impl Matrix {
    /// Builds a matrix from row-major entries; every entry must belong to
    /// `ring` and the length must match the shape.
    pub fn new(ring: &Ring, rows: usize, cols: usize, data: Vec<RingElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "expected {rows}x{cols} = {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        for e in &data {
            ring.check_same(e.ring())?;
        }
        Ok(Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(
        ring: &Ring,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> RingElement,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(ring, rows, cols, data)
    }

    /// Builds a matrix from rows of integers.
    pub fn from_int_rows(ring: &Ring, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
        }
        Matrix::from_fn(ring, r, c, |i, j| ring.from_i64(rows[i][j]))
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Self {
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// `e` times the identity.
    pub fn scalar(ring: &Ring, n: usize, e: &RingElement) -> Self {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, e.clone());
        }
        m
    }

    /// A single-column matrix.
    pub fn column(ring: &Ring, entries: Vec<RingElement>) -> Result<Self> {
        let n = entries.len();
        Matrix::new(ring, n, 1, entries)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> &RingElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElement) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// The `j`-th column as an `rows x 1` matrix.
    pub fn col(&self, j: usize) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: 1,
            data: (0..self.rows).map(|i| self.entry(i, j).clone()).collect(),
        }
    }

    /// A new matrix keeping the selected columns, in the given order.
    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: idx.len(),
            data: (0..self.rows)
                .flat_map(|i| idx.iter().map(move |&j| (i, j)))
                .map(|(i, j)| self.entry(i, j).clone())
                .collect(),
        }
    }

    /// The first `k` rows.
    pub fn top_rows(&self, k: usize) -> Matrix {
        assert!(k <= self.rows);
        Matrix {
            ring: self.ring.clone(),
            rows: k,
            cols: self.cols,
            data: self.data[..k * self.cols].to_vec(),
        }
    }

    /// Drops columns that are entirely zero.
    pub fn drop_zero_cols(&self) -> Matrix {
        let keep: Vec<usize> = (0..self.cols)
            .filter(|&j| (0..self.rows).any(|i| !self.entry(i, j).is_zero()))
            .collect();
        self.select_cols(&keep)
    }

    pub fn transpose(&self) -> Matrix {
        Matrix {
            ring: self.ring.clone(),
            rows: self.cols,
            cols: self.rows,
            data: (0..self.cols)
                .flat_map(|j| (0..self.rows).map(move |i| (i, j)))
                .map(|(i, j)| self.entry(i, j).clone())
                .collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.ring.check_same(&other.ring)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zero(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.ring.zero();
                for k in 0..self.cols {
                    let prod = self.entry(i, k).mul(other.entry(k, j))?;
                    acc = acc.add(&prod)?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        self.ring.check_same(&other.ring)?;
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut out = Matrix::zero(&self.ring, self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.entry(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.entry(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        self.ring.check_same(&other.ring)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "vstack of {} and {} cols",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            ring: self.ring.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Block-diagonal assembly; all parts must share the ring.
    pub fn block_diag(ring: &Ring, parts: &[&Matrix]) -> Result<Matrix> {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zero(ring, rows, cols);
        let mut r0 = 0;
        let mut c0 = 0;
        for p in parts {
            ring.check_same(&p.ring)?;
            for i in 0..p.rows {
                for j in 0..p.cols {
                    out.set(r0 + i, c0 + j, p.entry(i, j).clone());
                }
            }
            r0 += p.rows;
            c0 += p.cols;
        }
        Ok(out)
    }

    /// `k` copies of `self` on the block diagonal.
    pub fn block_diag_copies(&self, k: usize) -> Matrix {
        let parts: Vec<&Matrix> = std::iter::repeat(self).take(k).collect();
        Matrix::block_diag(&self.ring, &parts).expect("same ring")
    }

    /// The Kronecker-style blow-up sending entry `a_ij` to the block
    /// `a_ij * I_k`; maps between direct powers of a module act on generator
    /// coordinates through this matrix.
    pub fn tensor_identity(&self, k: usize) -> Matrix {
        let mut out = Matrix::zero(&self.ring, self.rows * k, self.cols * k);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.entry(i, j);
                if !e.is_zero() {
                    for t in 0..k {
                        out.set(i * k + t, j * k + t, e.clone());
                    }
                }
            }
        }
        out
    }

    pub fn map_entries(&self, mut f: impl FnMut(&RingElement) -> RingElement) -> Matrix {
        let data = self.data.iter().map(|e| f(e)).collect();
        Matrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Re-targets entries into another ring via a fallible entry map.
    pub fn try_map_entries(
        &self,
        ring: &Ring,
        mut f: impl FnMut(&RingElement) -> Result<RingElement>,
    ) -> Result<Matrix> {
        let mut data = Vec::with_capacity(self.data.len());
        for e in &self.data {
            data.push(f(e)?);
        }
        Matrix::new(ring, self.rows, self.cols, data)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let x = self.entry(a, j).clone();
            let y = self.entry(b, j).clone();
            self.set(a, j, y);
            self.set(b, j, x);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            let x = self.entry(i, a).clone();
            let y = self.entry(i, b).clone();
            self.set(i, a, y);
            self.set(i, b, x);
        }
    }

    /// `row_a += c * row_b`.
    pub(crate) fn add_scaled_row(&mut self, a: usize, b: usize, c: &RingElement) -> Result<()> {
        for j in 0..self.cols {
            let v = self.entry(a, j).add(&self.entry(b, j).mul(c)?)?;
            self.set(a, j, v);
        }
        Ok(())
    }

    /// `col_a += c * col_b`.
    pub(crate) fn add_scaled_col(&mut self, a: usize, b: usize, c: &RingElement) -> Result<()> {
        for i in 0..self.rows {
            let v = self.entry(i, a).add(&self.entry(i, b).mul(c)?)?;
            self.set(i, a, v);
        }
        Ok(())
    }

    pub(crate) fn scale_row(&mut self, a: usize, c: &RingElement) -> Result<()> {
        for j in 0..self.cols {
            let v = self.entry(a, j).mul(c)?;
            self.set(a, j, v);
        }
        Ok(())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "[ {} ]", row.join(", "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::coeff::BaseRing;

    fn zz() -> Ring {
        Ring::integers()
    }

    #[test]
    fn shape_checks() {
        let r = zz();
        assert!(Matrix::new(&r, 2, 2, vec![r.one(); 3]).is_err());
        let q = Ring::rationals();
        let bad = Matrix::new(&r, 1, 1, vec![q.one()]);
        assert!(bad.is_err(), "entries from another ring must be rejected");
    }

    #[test]
    fn multiply_and_transpose() {
        let r = zz();
        let a = Matrix::from_int_rows(&r, &[vec![1, 2], vec![3, 4]]).unwrap();
        let b = Matrix::from_int_rows(&r, &[vec![0, 1], vec![1, 0]]).unwrap();
        let ab = a.mul(&b).unwrap();
        assert_eq!(
            ab,
            Matrix::from_int_rows(&r, &[vec![2, 1], vec![4, 3]]).unwrap()
        );
        let at = a.transpose();
        assert_eq!(
            at,
            Matrix::from_int_rows(&r, &[vec![1, 3], vec![2, 4]]).unwrap()
        );
    }

    #[test]
    fn stacking_and_blocks() {
        let r = zz();
        let a = Matrix::from_int_rows(&r, &[vec![1], vec![2]]).unwrap();
        let b = Matrix::from_int_rows(&r, &[vec![3], vec![4]]).unwrap();
        let h = a.hstack(&b).unwrap();
        assert_eq!(
            h,
            Matrix::from_int_rows(&r, &[vec![1, 3], vec![2, 4]]).unwrap()
        );
        let d = Matrix::block_diag(&r, &[&a, &b]).unwrap();
        assert_eq!(d.rows(), 4);
        assert_eq!(d.cols(), 2);
        assert_eq!(d.entry(2, 1), &r.from_i64(3));
        assert_eq!(d.entry(0, 1), &r.zero());
    }

    #[test]
    fn tensor_identity_blowup() {
        let r = zz();
        let a = Matrix::from_int_rows(&r, &[vec![2, 3]]).unwrap();
        let t = a.tensor_identity(2);
        assert_eq!(t.rows(), 2);
        assert_eq!(t.cols(), 4);
        assert_eq!(t.entry(0, 0), &r.from_i64(2));
        assert_eq!(t.entry(1, 1), &r.from_i64(2));
        assert_eq!(t.entry(0, 2), &r.from_i64(3));
        assert_eq!(t.entry(1, 3), &r.from_i64(3));
        assert_eq!(t.entry(0, 1), &r.zero());
    }

    #[test]
    fn zero_shapes_are_fine() {
        let r = Ring::polynomial(BaseRing::Rat, vec!["x".into()]).unwrap();
        let a = Matrix::zero(&r, 0, 3);
        let b = Matrix::zero(&r, 3, 0);
        let p = a.mul(&b).unwrap();
        assert_eq!((p.rows(), p.cols()), (0, 0));
        let q = b.mul(&a).unwrap();
        assert_eq!((q.rows(), q.cols()), (3, 3));
        assert!(q.is_zero());
    }
}
