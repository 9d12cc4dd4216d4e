//! Banded Cholesky factorization for the grid-ordered finite-element
//! matrices, with triangular solves and multiplies.

use super::sparse::Csr;
use crate::linalg::LinalgError;

/// Lower-banded Cholesky factor: row `i` stores `L(i, i−bw … i)` densely.
#[derive(Clone, Debug)]
pub struct BandedCholesky {
    n: usize,
    bw: usize,
    rows: Vec<f64>, // (bw + 1) entries per row; rows[i*(bw+1) + (j − i + bw)]
}

impl BandedCholesky {
    /// Factor a symmetric positive definite CSR matrix.
    pub fn new(m: &Csr) -> Result<Self, LinalgError> {
        assert_eq!(m.nrows(), m.ncols(), "matrix must be square");
        let n = m.nrows();
        let bw = m.half_bandwidth();
        let stride = bw + 1;
        let mut rows = vec![0.0; n * stride];
        // load the lower band
        for i in 0..n {
            let (cols, vals) = m.row(i);
            for (c, v) in cols.iter().zip(vals) {
                if *c <= i {
                    rows[i * stride + (c + bw - i)] = *v;
                }
            }
        }
        let max_diag =
            (0..n).fold(0.0_f64, |acc, i| acc.max(rows[i * stride + bw].abs()));
        let floor = crate::tol::DEFAULT.cholesky_pivot_rel * max_diag.max(f64::MIN_POSITIVE);

        for i in 0..n {
            let lo = i.saturating_sub(bw);
            for j in lo..i {
                // L(i, j) = (A(i, j) − Σ_k L(i, k) L(j, k)) / L(j, j)
                let kstart = lo.max(j.saturating_sub(bw));
                let mut sum = rows[i * stride + (j + bw - i)];
                for k in kstart..j {
                    sum -= rows[i * stride + (k + bw - i)] * rows[j * stride + (k + bw - j)];
                }
                rows[i * stride + (j + bw - i)] = sum / rows[j * stride + bw];
            }
            let mut sum = rows[i * stride + bw];
            for k in lo..i {
                let l = rows[i * stride + (k + bw - i)];
                sum -= l * l;
            }
            if sum <= floor {
                return Err(LinalgError::NotPositiveDefinite { pivot: sum, index: i });
            }
            rows[i * stride + bw] = sum.sqrt();
        }
        Ok(BandedCholesky { n, bw, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn entry(&self, i: usize, j: usize) -> f64 {
        self.rows[i * (self.bw + 1) + (j + self.bw - i)]
    }

    /// Solve `L y = b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let mut y = b.to_vec();
        let stride = self.bw + 1;
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let mut sum = y[i];
            let row = &self.rows[i * stride..(i + 1) * stride];
            for k in lo..i {
                sum -= row[k + self.bw - i] * y[k];
            }
            y[i] = sum / row[self.bw];
        }
        y
    }

    /// Solve `Lᵀ x = y`.
    pub fn back(&self, y: &[f64]) -> Vec<f64> {
        let mut x = y.to_vec();
        for i in (0..self.n).rev() {
            let xi = x[i] / self.entry(i, i);
            x[i] = xi;
            let lo = i.saturating_sub(self.bw);
            for k in lo..i {
                x[k] -= self.entry(i, k) * xi;
            }
        }
        x
    }

    /// Solve `L Lᵀ x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.back(&self.forward(b))
    }

    /// `L v` (triangular multiply).
    pub fn mul_l(&self, v: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.bw);
            let mut acc = 0.0;
            for k in lo..=i {
                acc += self.entry(i, k) * v[k];
            }
            y[i] = acc;
        }
        y
    }

    /// `Lᵀ v` (triangular multiply).
    pub fn mul_lt(&self, v: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let vi = v[i];
            if vi != 0.0 {
                let lo = i.saturating_sub(self.bw);
                for k in lo..=i {
                    y[k] += self.entry(i, k) * vi;
                }
            }
        }
        y
    }
}
