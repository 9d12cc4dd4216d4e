//! Lanczos iteration with full reorthogonalization for extremal eigenvalues
//! of self-adjoint operators, plus a generalized variant for definite pencils
//! `A v = λ B v` that only needs the action of `B^{-1}`.

use super::dense::vecops;
use super::eig::{tridiag_eig, tridiag_eig_vectors};
use super::operator::LinearOperator;
use super::LinalgError;
use crate::tol::DEFAULT;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// Which end of the spectrum to resolve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Smallest,
    Largest,
    Both,
}

/// Options for the Lanczos drivers.
#[derive(Clone, Debug)]
pub struct LanczosOptions {
    /// Relative accuracy target on the extremal eigenvalues.
    pub rtol: f64,
    /// Maximum Krylov dimension (`min(n, max_dim)` is used).
    pub max_dim: usize,
    /// Seed for the random start vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions { rtol: DEFAULT.lanczos_rtol, max_dim: DEFAULT.lanczos_max_dim, seed: 1 }
    }
}

/// Extremal eigenvalue estimates with a convergence flag; when the Krylov
/// budget runs out, the best estimates are still reported.
#[derive(Clone, Debug)]
pub struct ExtremalEigs {
    pub smallest: f64,
    pub largest: f64,
    pub converged: bool,
    pub steps: usize,
}

impl ExtremalEigs {
    /// Convert an unconverged run into [`LinalgError::NoConvergence`].
    pub fn into_result(self, which: Which) -> Result<Self, LinalgError> {
        if self.converged {
            Ok(self)
        } else {
            let best = match which {
                Which::Smallest => self.smallest,
                _ => self.largest,
            };
            Err(LinalgError::NoConvergence { steps: self.steps, best })
        }
    }
}

/// A Ritz value with its residual bound `β_k |s_k|`.
#[derive(Clone, Copy, Debug)]
pub struct RitzPair {
    pub value: f64,
    pub residual: f64,
}

/// Ritz data from a pencil Lanczos run.
#[derive(Clone, Debug)]
pub struct PencilRitz {
    pub pairs: Vec<RitzPair>,
    pub steps: usize,
    /// The Krylov space reached the full problem dimension (or broke down),
    /// so the Ritz values are exact up to round-off.
    pub exhausted: bool,
}

impl PencilRitz {
    /// Ritz values whose residual passes `rtol`, scaled by the spectral
    /// radius estimate.
    pub fn converged_values(&self, rtol: f64) -> Vec<f64> {
        let radius =
            self.pairs.iter().fold(0.0_f64, |acc, p| acc.max(p.value.abs())).max(f64::MIN_POSITIVE);
        self.pairs
            .iter()
            .filter(|p| self.exhausted || p.residual <= rtol * radius)
            .map(|p| p.value)
            .collect()
    }
}

fn random_unit(n: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let norm = vecops::norm2(&v);
    vecops::scale(1.0 / norm, &mut v);
    v
}

/// Solve `(T − θI) x = b` for symmetric tridiagonal `T` using Gaussian
/// elimination with partial pivoting (one band of fill-in).
fn tridiag_shifted_solve(d: &[f64], e: &[f64], theta: f64, b: &[f64]) -> Vec<f64> {
    let n = d.len();
    let mut main: Vec<f64> = d.iter().map(|x| x - theta).collect();
    let mut upper = vec![0.0; n.saturating_sub(1)];
    let mut upper2 = vec![0.0; n.saturating_sub(2)];
    let mut rhs = b.to_vec();
    upper[..n - 1].copy_from_slice(&e[..n - 1]);
    let mut sub: Vec<f64> = e[..n - 1].to_vec();

    for i in 0..n - 1 {
        if sub[i].abs() > main[i].abs() {
            // swap rows i and i+1
            std::mem::swap(&mut main[i], &mut sub[i]);
            let old_upper_i = upper[i];
            upper[i] = main[i + 1];
            main[i + 1] = old_upper_i;
            if i + 1 < n - 1 {
                upper2[i] = upper[i + 1];
                upper[i + 1] = 0.0;
            }
            rhs.swap(i, i + 1);
        }
        let pivot = if main[i] == 0.0 { 1e-300 } else { main[i] };
        let factor = sub[i] / pivot;
        main[i + 1] -= factor * upper[i];
        if i < upper2.len() {
            upper[i + 1] -= factor * upper2[i];
        }
        rhs[i + 1] -= factor * rhs[i];
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut sum = rhs[i];
        if i + 1 < n {
            sum -= upper[i] * x[i + 1];
        }
        if i + 2 < n {
            sum -= upper2[i] * x[i + 2];
        }
        let pivot = if main[i] == 0.0 { 1e-300 } else { main[i] };
        x[i] = sum / pivot;
    }
    x
}

/// `|s_k|` for the normalized eigenvector of the tridiagonal `(d, e)`
/// belonging to the eigenvalue nearest `theta`, via inverse iteration.
fn bottom_component(d: &[f64], e: &[f64], theta: f64) -> f64 {
    let n = d.len();
    if n == 1 {
        return 1.0;
    }
    // tiny perturbation keeps the shifted matrix solvable when theta is exact
    let scale = d.iter().chain(e.iter()).fold(0.0_f64, |m, v| m.max(v.abs()));
    let shift = theta + scale * 1e-14;
    let mut x = vec![1.0; n];
    for _ in 0..2 {
        x = tridiag_shifted_solve(d, e, shift, &x);
        let norm = vecops::norm2(&x);
        if !norm.is_finite() || norm == 0.0 {
            return 1.0;
        }
        vecops::scale(1.0 / norm, &mut x);
    }
    x[n - 1].abs()
}

fn orthogonalize(w: &mut [f64], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        for q in basis {
            let c = vecops::dot(w, q);
            vecops::axpy(-c, q, w);
        }
    }
}

/// Extremal eigenvalues of a self-adjoint operator by Lanczos with full
/// reorthogonalization. The caller guarantees self-adjointness.
pub fn extremal_eigs(op: &dyn LinearOperator, which: Which, opts: &LanczosOptions) -> ExtremalEigs {
    let n = op.dim();
    let max_dim = opts.max_dim.min(n);
    let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);

    let mut basis: Vec<Vec<f64>> = vec![random_unit(n, &mut rng)];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut smallest = f64::NAN;
    let mut largest = f64::NAN;

    for j in 0..max_dim {
        let q = &basis[j];
        let mut w = op.apply(q);
        let alpha = vecops::dot(&w, q);
        vecops::axpy(-alpha, q, &mut w);
        if j > 0 {
            let beta_prev = betas[j - 1];
            let q_prev = &basis[j - 1];
            vecops::axpy(-beta_prev, q_prev, &mut w);
        }
        orthogonalize(&mut w, &basis);
        alphas.push(alpha);
        let beta = vecops::norm2(&w);

        let vals = tridiag_eig(&alphas, &betas).expect("lanczos tridiagonal");
        smallest = vals[0];
        largest = vals[vals.len() - 1];
        let spread = smallest.abs().max(largest.abs()).max(f64::MIN_POSITIVE);

        let exhausted = basis.len() == n || beta <= 1e-13 * spread;
        if exhausted {
            return ExtremalEigs { smallest, largest, converged: true, steps: j + 1 };
        }

        let res_small = beta * bottom_component(&alphas, &betas, smallest);
        let res_large = beta * bottom_component(&alphas, &betas, largest);
        let ok = match which {
            Which::Smallest => res_small <= opts.rtol * spread,
            Which::Largest => res_large <= opts.rtol * spread,
            Which::Both => {
                res_small <= opts.rtol * spread && res_large <= opts.rtol * spread
            }
        };
        // require a few steps so both ends are populated
        if ok && alphas.len() >= 3.min(n) {
            return ExtremalEigs { smallest, largest, converged: true, steps: j + 1 };
        }

        betas.push(beta);
        vecops::scale(1.0 / beta, &mut w);
        basis.push(w);
    }

    ExtremalEigs { smallest, largest, converged: false, steps: max_dim }
}

/// Lanczos for the definite pencil `A v = λ B v`, run on the operator
/// `A B^{-1}` in the `B^{-1}` inner product, so only the actions of `A` and
/// `B^{-1}` are needed. Returns all Ritz pairs of the final tridiagonal with
/// residual bounds; converged pairs approximate eigenvalues of `B^{-1} A`.
pub fn pencil_lanczos(
    a_op: &dyn LinearOperator,
    b_inv_op: &dyn LinearOperator,
    opts: &LanczosOptions,
) -> PencilRitz {
    let n = a_op.dim();
    assert_eq!(b_inv_op.dim(), n, "pencil operator dimension mismatch");
    let max_dim = opts.max_dim.min(n);
    let mut rng = ChaCha12Rng::seed_from_u64(opts.seed);

    // q-basis is B^{-1}-orthonormal; y_i = B^{-1} q_i cached for inner products
    let q0 = {
        let v = random_unit(n, &mut rng);
        let y = b_inv_op.apply(&v);
        let norm = vecops::dot(&v, &y).sqrt();
        (v.iter().map(|x| x / norm).collect::<Vec<f64>>(), y.iter().map(|x| x / norm).collect::<Vec<f64>>())
    };
    let mut q_basis: Vec<Vec<f64>> = vec![q0.0];
    let mut y_basis: Vec<Vec<f64>> = vec![q0.1];
    let mut alphas: Vec<f64> = Vec::new();
    let mut betas: Vec<f64> = Vec::new();
    let mut exhausted = false;
    let mut beta_last = 0.0;

    for j in 0..max_dim {
        let mut w = a_op.apply(&y_basis[j]);
        let alpha = vecops::dot(&w, &y_basis[j]);
        vecops::axpy(-alpha, &q_basis[j], &mut w);
        if j > 0 {
            vecops::axpy(-betas[j - 1], &q_basis[j - 1], &mut w);
        }
        // full reorthogonalization in the B^{-1} inner product
        for _ in 0..2 {
            for (q, y) in q_basis.iter().zip(&y_basis) {
                let c = vecops::dot(&w, y);
                vecops::axpy(-c, q, &mut w);
            }
        }
        alphas.push(alpha);

        let yw = b_inv_op.apply(&w);
        let beta2 = vecops::dot(&w, &yw);
        let beta = beta2.max(0.0).sqrt();
        beta_last = beta;

        let scale = alphas.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
        if q_basis.len() == n || beta <= 1e-13 * scale {
            exhausted = true;
            break;
        }
        if j + 1 == max_dim {
            break;
        }
        betas.push(beta);
        q_basis.push(w.iter().map(|x| x / beta).collect());
        y_basis.push(yw.iter().map(|x| x / beta).collect());
    }

    let steps = alphas.len();
    let (values, z) = tridiag_eig_vectors(&alphas, &betas).expect("lanczos tridiagonal");
    let pairs = values
        .iter()
        .enumerate()
        .map(|(idx, &value)| RitzPair {
            value,
            residual: if exhausted { 0.0 } else { beta_last * z.get(steps - 1, idx).abs() },
        })
        .collect();
    PencilRitz { pairs, steps, exhausted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::{Mat, SymMatrix};
    use crate::linalg::eig::{gen_eig_all, sym_eigvalues};
    use crate::linalg::operator::DiagOperator;
    use crate::linalg::cholesky::cholesky;

    #[test]
    fn diagonal_largest_and_both() {
        let d: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let op = DiagOperator(d);
        let r = extremal_eigs(&op, Which::Largest, &LanczosOptions::default());
        assert!(r.converged);
        assert!((r.largest - 10.0).abs() < 1e-8);
        let r = extremal_eigs(&op, Which::Both, &LanczosOptions::default());
        assert!(r.converged);
        assert!((r.smallest - 1.0).abs() < 1e-8 && (r.largest - 10.0).abs() < 1e-8);
    }

    #[test]
    fn random_spd_matches_dense_extremes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        let n = 200;
        let b = Mat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let mut m = SymMatrix::gram(&b);
        m.add_scaled_identity(0.1);
        let dense = sym_eigvalues(&m).unwrap();
        let r = extremal_eigs(&m, Which::Both, &LanczosOptions::default());
        assert!(r.converged, "no convergence after {} steps", r.steps);
        assert!((r.smallest - dense[0]).abs() <= 1e-8 * dense[n - 1].abs());
        assert!((r.largest - dense[n - 1]).abs() <= 1e-8 * dense[n - 1].abs());
    }

    #[test]
    fn pencil_lanczos_matches_dense_pencil() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(29);
        let n = 60;
        let b = Mat::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
        let a = SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let mut s = SymMatrix::gram(&b);
        s.add_scaled_identity(0.5);
        let dense = gen_eig_all(&a, &s).unwrap();

        let f = cholesky(&s).unwrap();
        let s_inv = crate::linalg::operator::FnOperator::new(n, |v: &[f64]| f.solve(v));
        let ritz = pencil_lanczos(&a, &s_inv, &LanczosOptions::default());
        assert!(ritz.exhausted, "small problem should exhaust the space");
        let got = ritz.converged_values(1e-8);
        assert_eq!(got.len(), n);
        for (x, y) in got.iter().zip(&dense) {
            assert!((x - y).abs() <= 1e-7 * dense[n - 1].abs().max(1.0), "{x} vs {y}");
        }
    }

    #[test]
    fn shifted_solve_matches_direct() {
        let d = vec![2.0, -1.0, 3.0, 0.5];
        let e = vec![1.0, 0.25, -0.75];
        let theta = 0.3;
        let b = vec![1.0, -2.0, 0.5, 3.0];
        let x = tridiag_shifted_solve(&d, &e, theta, &b);
        // multiply back
        let n = 4;
        for i in 0..n {
            let mut acc = (d[i] - theta) * x[i];
            if i > 0 {
                acc += e[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += e[i] * x[i + 1];
            }
            assert!((acc - b[i]).abs() < 1e-12, "row {i}: {acc} vs {}", b[i]);
        }
    }
}
