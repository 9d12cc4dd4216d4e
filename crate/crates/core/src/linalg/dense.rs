//! Dense matrix storage: a general rectangular matrix and a packed symmetric
//! matrix whose storage makes `entries(i,j) == entries(j,i)` hold exactly.

use super::LinalgError;

/// Row-major dense rectangular matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    nrows: usize,
    ncols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat { nrows, ncols, data: vec![0.0; nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    /// Build from a row-major slice.
    pub fn from_rows(nrows: usize, ncols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), nrows * ncols, "entry count mismatch");
        Mat { nrows, ncols, data: entries.to_vec() }
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(nrows, ncols);
        for i in 0..nrows {
            for j in 0..ncols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.ncols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.ncols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Split the backing storage at the start of row `i`.
    pub(crate) fn split_rows_mut(&mut self, i: usize) -> (&[f64], &mut [f64]) {
        let cols = self.ncols;
        let (a, b) = self.data.split_at_mut(i * cols);
        (&*a, b)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "matvec dimension mismatch");
        let mut y = vec![0.0; self.nrows];
        for i in 0..self.nrows {
            y[i] = vecops::dot(self.row(i), x);
        }
        y
    }

    /// `self^T x`.
    pub fn t_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.nrows, "t_matvec dimension mismatch");
        let mut y = vec![0.0; self.ncols];
        for i in 0..self.nrows {
            let xi = x[i];
            if xi != 0.0 {
                vecops::axpy(xi, self.row(i), &mut y);
            }
        }
        y
    }

    /// `self * other`, accumulating along rows of `other` for locality.
    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.ncols, other.nrows, "matmul dimension mismatch");
        let mut out = Mat::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            let arow = self.row(i);
            // out.row(i) += a[i][k] * other.row(k)
            for (k, &aik) in arow.iter().enumerate() {
                if aik != 0.0 {
                    let brow = other.row(k);
                    let orow = out.row_mut(i);
                    vecops::axpy(aik, brow, orow);
                }
            }
        }
        out
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn scale(&mut self, c: f64) {
        for v in &mut self.data {
            *v *= c;
        }
    }
}

/// Symmetric matrix stored as the packed lower triangle, enforcing exact
/// symmetry by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn tri_index(i: usize, j: usize) -> usize {
    debug_assert!(j <= i);
    i * (i + 1) / 2 + j
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "dimension must be at least 1");
        SymMatrix { n, data: vec![0.0; n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = SymMatrix::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Build from a symmetric closure evaluated on the lower triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Build from row-major entries of a full square matrix, requiring exact
    /// symmetry.
    pub fn from_rows(n: usize, entries: &[f64]) -> Result<Self, LinalgError> {
        assert_eq!(entries.len(), n * n, "entry count mismatch");
        for i in 0..n {
            for j in 0..i {
                if entries[i * n + j] != entries[j * n + i] {
                    return Err(LinalgError::ShapeMismatch { expected: i, got: j });
                }
            }
        }
        Ok(SymMatrix::from_fn(n, |i, j| entries[i * n + j]))
    }

    /// Symmetric part `(A + A^T) / 2` of a square dense matrix.
    pub fn symmetric_part(a: &Mat) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "symmetric part needs a square matrix");
        SymMatrix::from_fn(a.nrows(), |i, j| 0.5 * (a.get(i, j) + a.get(j, i)))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j <= i {
            self.data[tri_index(i, j)]
        } else {
            self.data[tri_index(j, i)]
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        if j <= i {
            self.data[tri_index(i, j)] = v;
        } else {
            self.data[tri_index(j, i)] = v;
        }
    }

    pub fn to_dense(&self) -> Mat {
        Mat::from_fn(self.n, self.n, |i, j| self.get(i, j))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "matvec dimension mismatch");
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let row = &self.data[tri_index(i, 0)..=tri_index(i, i)];
            let mut acc = 0.0;
            for (j, &v) in row.iter().enumerate() {
                acc += v * x[j];
                if j < i {
                    y[j] += v * x[i];
                }
            }
            y[i] += acc;
        }
        y
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn frob_norm(&self) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let v = self.data[tri_index(i, j)];
                acc += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        acc.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self + c·I`.
    pub fn add_scaled_identity(&mut self, c: f64) {
        for i in 0..self.n {
            let v = self.get(i, i);
            self.set(i, i, v + c);
        }
    }

    pub fn scaled(&self, c: f64) -> SymMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= c;
        }
        out
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    /// `B^T B` for a rectangular `B` (result of order `B.ncols()`).
    pub fn gram(b: &Mat) -> SymMatrix {
        let n = b.ncols();
        let mut out = SymMatrix::zeros(n);
        for k in 0..b.nrows() {
            let row = b.row(k);
            for i in 0..n {
                let ri = row[i];
                if ri != 0.0 {
                    for j in 0..=i {
                        let v = out.data[tri_index(i, j)] + ri * row[j];
                        out.data[tri_index(i, j)] = v;
                    }
                }
            }
        }
        out
    }
}

/// Small vector helpers used across the crate. Dot products run with four
/// independent accumulators so the reduction pipelines.
pub mod vecops {
    #[inline]
    pub fn dot(a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        let mut acc = [0.0_f64; 4];
        let ca = a.chunks_exact(4);
        let cb = b.chunks_exact(4);
        let (ra, rb) = (ca.remainder(), cb.remainder());
        for (xa, xb) in ca.zip(cb) {
            acc[0] += xa[0] * xb[0];
            acc[1] += xa[1] * xb[1];
            acc[2] += xa[2] * xb[2];
            acc[3] += xa[3] * xb[3];
        }
        let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
        for (xa, xb) in ra.iter().zip(rb) {
            s += xa * xb;
        }
        s
    }

    #[inline]
    pub fn norm2(a: &[f64]) -> f64 {
        dot(a, a).sqrt()
    }

    /// `y += alpha * x`.
    #[inline]
    pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), y.len());
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi += alpha * xi;
        }
    }

    #[inline]
    pub fn scale(alpha: f64, x: &mut [f64]) {
        for v in x {
            *v *= alpha;
        }
    }

    pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sym_storage_is_exactly_symmetric() {
        let mut m = SymMatrix::zeros(4);
        m.set(2, 1, 3.5);
        assert_eq!(m.get(1, 2), 3.5);
        m.set(0, 3, -1.25);
        assert_eq!(m.get(3, 0), -1.25);
    }

    #[test]
    fn sym_matvec_matches_dense() {
        let m = SymMatrix::from_fn(5, |i, j| (i + 2 * j) as f64 + if i == j { 10.0 } else { 0.0 });
        let x: Vec<f64> = (0..5).map(|i| i as f64 - 2.0).collect();
        let y = m.matvec(&x);
        let yd = m.to_dense().matvec(&x);
        for (a, b) in y.iter().zip(&yd) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn matmul_and_transpose() {
        let a = Mat::from_rows(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let b = a.transpose();
        let c = a.matmul(&b);
        assert_eq!(c.get(0, 0), 14.0);
        assert_eq!(c.get(0, 1), 32.0);
        assert_eq!(c.get(1, 1), 77.0);
    }

    #[test]
    fn gram_matches_explicit_product() {
        let b = Mat::from_rows(2, 3, &[1.0, -1.0, 2.0, 0.5, 3.0, -2.0]);
        let g = SymMatrix::gram(&b);
        let explicit = b.transpose().matmul(&b);
        for i in 0..3 {
            for j in 0..3 {
                assert!((g.get(i, j) - explicit.get(i, j)).abs() < 1e-14);
            }
        }
    }
}
