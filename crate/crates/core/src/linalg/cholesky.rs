//! Dense Cholesky factorization of symmetric positive definite matrices and
//! the triangular solves / congruences built on it.

use super::dense::{Mat, SymMatrix};
use super::LinalgError;
use crate::tol::DEFAULT;

/// Lower-triangular Cholesky factor `L` with `L L^T = M`.
#[derive(Clone, Debug)]
pub struct CholeskyFactor {
    l: Mat,
}

/// Factor a symmetric positive definite matrix.
///
/// Fails with [`LinalgError::NotPositiveDefinite`] when a pivot drops below
/// `cholesky_pivot_rel · max(diag)`, which signals a violated positivity
/// assumption upstream.
pub fn cholesky(m: &SymMatrix) -> Result<CholeskyFactor, LinalgError> {
    let n = m.n();
    let max_diag = (0..n).fold(0.0_f64, |acc, i| acc.max(m.get(i, i).abs()));
    let pivot_floor = DEFAULT.cholesky_pivot_rel * max_diag.max(f64::MIN_POSITIVE);

    let mut l = Mat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut sum = m.get(i, j);
            for k in 0..j {
                sum -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if sum <= pivot_floor {
                    return Err(LinalgError::NotPositiveDefinite { pivot: sum, index: i });
                }
                l.set(i, j, sum.sqrt());
            } else {
                l.set(i, j, sum / l.get(j, j));
            }
        }
    }
    Ok(CholeskyFactor { l })
}

impl CholeskyFactor {
    pub fn n(&self) -> usize {
        self.l.nrows()
    }

    pub fn lower(&self) -> &Mat {
        &self.l
    }

    /// Solve `L y = b`.
    pub fn forward(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(b.len(), n);
        let mut y = b.to_vec();
        for i in 0..n {
            let row = self.l.row(i);
            let mut sum = y[i];
            for k in 0..i {
                sum -= row[k] * y[k];
            }
            y[i] = sum / row[i];
        }
        y
    }

    /// Solve `L^T x = y`.
    pub fn back(&self, y: &[f64]) -> Vec<f64> {
        let n = self.n();
        assert_eq!(y.len(), n);
        let mut x = y.to_vec();
        for i in (0..n).rev() {
            x[i] /= self.l.get(i, i);
            let xi = x[i];
            // subtract column i of L from remaining entries
            for k in 0..i {
                x[k] -= self.l.get(i, k) * xi;
            }
        }
        x
    }

    /// Solve `L L^T x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.back(&self.forward(b))
    }

    /// `L^{-1} X`, forward substitution applied to all columns at once.
    pub fn forward_mat(&self, x: &Mat) -> Mat {
        let n = self.n();
        assert_eq!(x.nrows(), n);
        let mut out = x.clone();
        let cols = x.ncols();
        for i in 0..n {
            let (done, rest) = out.split_rows_mut(i);
            let lrow = self.l.row(i);
            let cur = &mut rest[..cols];
            for k in 0..i {
                let lik = lrow[k];
                if lik != 0.0 {
                    let prev = &done[k * cols..(k + 1) * cols];
                    for (c, p) in cur.iter_mut().zip(prev) {
                        *c -= lik * p;
                    }
                }
            }
            let d = lrow[i];
            for c in cur.iter_mut() {
                *c /= d;
            }
        }
        out
    }

    /// Congruence `L^{-1} A L^{-T}` for symmetric `A`; the result shares the
    /// spectrum of the pencil `(A, L L^T)`.
    pub fn reduce_pencil(&self, a: &SymMatrix) -> SymMatrix {
        let x = self.forward_mat(&a.to_dense());
        let y = self.forward_mat(&x.transpose());
        SymMatrix::symmetric_part(&y)
    }

    /// `v ↦ L^{-1} (A (L^{-T} v))`, the action of [`Self::reduce_pencil`].
    pub fn congruence_apply(&self, a: &SymMatrix, v: &[f64]) -> Vec<f64> {
        let t = self.back(v);
        let t = a.matvec(&t);
        self.forward(&t)
    }

    /// Reconstruct `L L^T` (diagnostic).
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.n();
        SymMatrix::from_fn(n, |i, j| {
            let mut acc = 0.0;
            for k in 0..=j.min(i) {
                acc += self.l.get(i, k) * self.l.get(j, k);
            }
            acc
        })
    }
}
