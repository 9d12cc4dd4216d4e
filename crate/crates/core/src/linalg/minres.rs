//! Preconditioned MINRES for symmetric (possibly indefinite) systems, in the
//! classical Paige–Saunders formulation with the Lanczos process run in the
//! `P^{-1}` inner product.

use super::dense::vecops;
use super::operator::LinearOperator;

/// Outcome of a MINRES solve.
///
/// `relative_residuals[k]` is the preconditioner-norm residual estimate after
/// iteration `k+1`, relative to the initial one; the true final residual
/// `‖b − Ax‖/‖b‖` is also recorded since the two norms differ under
/// preconditioning.
#[derive(Clone, Debug)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub iterations: usize,
    pub relative_residuals: Vec<f64>,
    pub converged: bool,
    pub true_relative_residual: f64,
}

/// Solve `A x = b` with self-adjoint `A` and SPD preconditioner given by its
/// inverse action `precond = v ↦ P^{-1} v`. Stops when the `P^{-1}`-norm
/// residual estimate drops below `rel_tol` times its initial value.
pub fn minres(
    a: &dyn LinearOperator,
    precond: &dyn LinearOperator,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> SolveReport {
    let n = a.dim();
    assert_eq!(b.len(), n, "rhs dimension mismatch");
    assert!(vecops::norm2(b) > 0.0, "rhs must be nonzero");

    let mut x = vec![0.0; n];
    let mut r1 = b.to_vec();
    let mut y = precond.apply(&r1);
    let beta1 = vecops::dot(&r1, &y);
    assert!(beta1 > 0.0, "preconditioner must be positive definite");
    let beta1 = beta1.sqrt();

    let mut r2 = r1.clone();
    let mut oldb = 0.0_f64;
    let mut beta = beta1;
    let mut dbar = 0.0_f64;
    let mut epsln = 0.0_f64;
    let mut phibar = beta1;
    let mut cs = -1.0_f64;
    let mut sn = 0.0_f64;
    let mut w = vec![0.0; n];
    let mut w2 = vec![0.0; n];

    let mut history = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for itn in 1..=max_iter {
        iterations = itn;

        // Lanczos step in the P^{-1} inner product
        let s = 1.0 / beta;
        let v: Vec<f64> = y.iter().map(|t| t * s).collect();
        let mut ay = a.apply(&v);
        if itn >= 2 {
            let c = beta / oldb;
            for (t, r) in ay.iter_mut().zip(&r1) {
                *t -= c * r;
            }
        }
        let alfa = vecops::dot(&v, &ay);
        {
            let c = alfa / beta;
            for (t, r) in ay.iter_mut().zip(&r2) {
                *t -= c * r;
            }
        }
        r1 = std::mem::replace(&mut r2, ay);
        y = precond.apply(&r2);
        oldb = beta;
        beta = vecops::dot(&r2, &y).max(0.0).sqrt();

        // previous rotation applied to the new column of the tridiagonal
        let oldeps = epsln;
        let delta = cs * dbar + sn * alfa;
        let gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;

        // next rotation
        let gamma = gbar.hypot(beta).max(f64::EPSILON);
        cs = gbar / gamma;
        sn = beta / gamma;
        let phi = cs * phibar;
        phibar *= sn;

        // solution update
        let denom = 1.0 / gamma;
        let w1 = std::mem::replace(&mut w2, std::mem::take(&mut w));
        w = (0..n)
            .map(|i| (v[i] - oldeps * w1[i] - delta * w2[i]) * denom)
            .collect();
        vecops::axpy(phi, &w, &mut x);

        let relres = phibar / beta1;
        history.push(relres);
        if relres <= rel_tol {
            converged = true;
            break;
        }
        if beta <= f64::EPSILON * beta1 {
            // exact solution reached inside the Krylov space
            converged = true;
            break;
        }
    }

    let residual = vecops::sub(b, &a.apply(&x));
    let true_relative_residual = vecops::norm2(&residual) / vecops::norm2(b);

    SolveReport {
        solution: x,
        iterations,
        relative_residuals: history,
        converged,
        true_relative_residual,
    }
}
