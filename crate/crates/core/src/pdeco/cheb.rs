//! Chebyshev semi-iteration with Jacobi splitting: a fixed polynomial
//! approximation of the mass-matrix inverse that keeps the preconditioner
//! symmetric and gives the explicit spectral inclusion
//! `λ(M̂^{-1} M) ⊂ [1 − ω, 1 + ω]` with `ω = 1/T_m((b+a)/(b−a))`.

use super::sparse::Csr;

/// `T_m(x)` for `x ≥ 1` in the stable exponential form.
pub fn chebyshev_t(m: usize, x: f64) -> f64 {
    debug_assert!(x >= 1.0);
    let s = (x * x - 1.0).sqrt();
    0.5 * ((x + s).powi(m as i32) + (x - s).powi(m as i32))
}

/// The contraction factor `ω = 1/T_m(5/3)` for the Jacobi-scaled mass matrix
/// whose spectrum sits in `[1/2, 2]`.
pub fn cheb_omega(m: usize) -> f64 {
    assert!(m >= 1, "at least one semi-iteration step");
    1.0 / chebyshev_t(m, 5.0 / 3.0)
}

/// Semi-iteration configuration: step count and the resulting `ω`.
#[derive(Clone, Copy, Debug)]
pub struct ChebyshevConfig {
    pub steps: usize,
    pub omega: f64,
}

impl ChebyshevConfig {
    pub fn new(steps: usize) -> Self {
        ChebyshevConfig { steps, omega: cheb_omega(steps) }
    }
}

/// Fixed-polynomial Chebyshev solver for `M x = r` with splitting matrix
/// `D = diag(M)` and a prescribed inclusion `λ(D^{-1} M) ⊂ [lo, hi]`.
pub struct ChebSolver<'a> {
    matrix: &'a Csr,
    inv_diag: Vec<f64>,
    lo: f64,
    hi: f64,
    pub steps: usize,
}

impl<'a> ChebSolver<'a> {
    pub fn new(matrix: &'a Csr, lo: f64, hi: f64, steps: usize) -> Self {
        assert!(steps >= 1 && lo > 0.0 && hi >= lo);
        let inv_diag = matrix.diagonal().iter().map(|d| 1.0 / d).collect();
        ChebSolver { matrix, inv_diag, lo, hi, steps }
    }

    /// Jacobi-splitting solver for the P1 mass matrix (`λ(D^{-1}M) ⊂ [1/2, 2]`).
    pub fn for_mass_matrix(matrix: &'a Csr, steps: usize) -> Self {
        Self::new(matrix, 0.5, 2.0, steps)
    }

    /// `m` steps of the semi-iteration from a zero start: a linear, symmetric
    /// action approximating `M^{-1} r`.
    pub fn apply(&self, r: &[f64]) -> Vec<f64> {
        let n = r.len();
        let theta = 0.5 * (self.hi + self.lo);
        let delta = 0.5 * (self.hi - self.lo);
        let mut x = vec![0.0; n];
        let mut res = r.to_vec();
        let mut d: Vec<f64> =
            res.iter().zip(&self.inv_diag).map(|(ri, di)| ri * di / theta).collect();

        if delta == 0.0 {
            // degenerate interval: plain scaled-Jacobi steps
            for step in 0..self.steps {
                for (xi, di) in x.iter_mut().zip(&d) {
                    *xi += di;
                }
                if step + 1 == self.steps {
                    break;
                }
                let md = self.matrix.matvec(&d);
                for (ri, mdi) in res.iter_mut().zip(&md) {
                    *ri -= mdi;
                }
                for ((di, ri), inv) in d.iter_mut().zip(&res).zip(&self.inv_diag) {
                    *di = ri * inv / theta;
                }
            }
            return x;
        }

        let sigma1 = theta / delta;
        let mut rho = 1.0 / sigma1;
        for step in 0..self.steps {
            for (xi, di) in x.iter_mut().zip(&d) {
                *xi += di;
            }
            if step + 1 == self.steps {
                break;
            }
            let md = self.matrix.matvec(&d);
            for (ri, mdi) in res.iter_mut().zip(&md) {
                *ri -= mdi;
            }
            let rho_next = 1.0 / (2.0 * sigma1 - rho);
            let coeff = 2.0 * rho_next / delta;
            for ((di, ri), inv) in d.iter_mut().zip(&res).zip(&self.inv_diag) {
                *di = rho_next * rho * *di + coeff * ri * inv;
            }
            rho = rho_next;
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SymMatrix;
    use crate::pdeco::fem::assemble_fem;

    #[test]
    fn omega_closed_forms() {
        assert!((cheb_omega(1) - 0.6).abs() < 1e-15);
        assert!((cheb_omega(3) - 27.0 / 365.0).abs() < 1e-15);
        // strictly decreasing, small for large m
        let mut prev = 1.0;
        for m in 1..=12 {
            let w = cheb_omega(m);
            assert!(w < prev && w > 0.0);
            prev = w;
        }
        assert!(cheb_omega(10) < 1e-4);
    }

    #[test]
    fn diagonal_matrix_is_solved_in_one_step() {
        let m = Csr::from_triplets(3, 3, vec![(0, 0, 2.0), (1, 1, 5.0), (2, 2, 0.5)]);
        // D^{-1}M = I: degenerate interval [1, 1]
        let solver = ChebSolver::new(&m, 1.0, 1.0, 1);
        let r = vec![4.0, 10.0, 2.0];
        let x = solver.apply(&r);
        assert!((x[0] - 2.0).abs() < 1e-15);
        assert!((x[1] - 2.0).abs() < 1e-15);
        assert!((x[2] - 4.0).abs() < 1e-15);
    }

    #[test]
    fn apply_is_linear() {
        let fem = assemble_fem(6);
        let solver = ChebSolver::for_mass_matrix(&fem.mass, 4);
        let r: Vec<f64> = (0..fem.n).map(|i| ((i * 13 % 17) as f64) / 17.0 - 0.4).collect();
        let a = 2.75;
        let scaled: Vec<f64> = r.iter().map(|v| a * v).collect();
        let x1 = solver.apply(&scaled);
        let x2 = solver.apply(&r);
        for (u, v) in x1.iter().zip(&x2) {
            assert!((u - a * v).abs() <= 1e-12 * v.abs().max(1.0));
        }
    }

    #[test]
    fn preconditioned_spectrum_in_omega_interval() {
        // dense check of λ(M̂^{-1}M) ⊂ [1−ω, 1+ω] on a coarse mesh:
        // λ(M̂^{-1}M) = λ(Lᵀ M̂^{-1} L) with M = L Lᵀ
        let fem = assemble_fem(16);
        let n = fem.n;
        let m_dense = fem.mass.to_sym_matrix();
        let f = crate::linalg::cholesky(&m_dense).unwrap();
        let l = f.lower();
        for steps in [1usize, 2, 3, 5] {
            let solver = ChebSolver::for_mass_matrix(&fem.mass, steps);
            // columns of M̂^{-1} L, then the congruence Lᵀ (M̂^{-1} L)
            let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
            for j in 0..n {
                let lcol: Vec<f64> = (0..n).map(|i| l.get(i, j)).collect();
                cols.push(solver.apply(&lcol));
            }
            let sym = SymMatrix::from_fn(n, |i, j| {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += l.get(k, i) * cols[j][k];
                }
                acc
            });
            let eigs = crate::linalg::sym_eigvalues(&sym).unwrap();
            let omega = cheb_omega(steps);
            assert!(eigs[0] >= 1.0 - omega - 1e-10, "steps {steps}: min {}", eigs[0]);
            assert!(eigs[n - 1] <= 1.0 + omega + 1e-10, "steps {steps}: max {}", eigs[n - 1]);
            // the inclusion should be close to sharp on this mesh
            assert!(eigs[0] <= 1.0 - 0.5 * omega, "steps {steps}: loose lower end {}", eigs[0]);
        }
    }

    #[test]
    fn apply_is_a_symmetric_operator() {
        use rand::{Rng, SeedableRng};
        let fem = assemble_fem(10);
        let solver = ChebSolver::for_mass_matrix(&fem.mass, 5);
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        for _ in 0..10 {
            let u: Vec<f64> = (0..fem.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..fem.n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let lhs = crate::linalg::vecops::dot(&solver.apply(&u), &v);
            let rhs = crate::linalg::vecops::dot(&u, &solver.apply(&v));
            assert!((lhs - rhs).abs() <= 1e-11 * lhs.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }
}
