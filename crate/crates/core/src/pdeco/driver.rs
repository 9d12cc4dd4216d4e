//! The optimal-control test problem: desired state from a forward solve,
//! KKT system assembly, the semi-iteration-based block preconditioner, its
//! field-of-value indicators, and the full bound/eigenvalue/iteration run.

use super::band::BandedCholesky;
use super::cheb::{cheb_omega, ChebSolver};
use super::fem::{node_coords, FemMatrices};
use crate::dsp::{compute_indicators, dsp_bounds, DspError, IndicatorSet};
use crate::experiments::report::{
    cluster_extremes, collect_violations, ExperimentReport, TheoreticalBounds,
};
use crate::linalg::{
    cholesky, minres, sym_eigvalues, CholeskyFactor, FnOperator, LanczosOptions, LinearOperator,
    Mat, SymMatrix, Which,
};
use crate::saddle::{BlockTridiagonalSystem, SaddleError, SchurChain};
use crate::tol::DEFAULT;
use std::time::Instant;

/// Nodal interpolation of the reference control `4x₁(1−x₁) + x₂`.
pub fn reference_control(fem: &FemMatrices) -> Vec<f64> {
    (0..fem.n)
        .map(|idx| {
            let (x1, x2) = node_coords(fem.divisions, idx);
            4.0 * x1 * (1.0 - x1) + x2
        })
        .collect()
}

/// Desired state: solve the forward problem `(K + M) y = −M u*` with the
/// reference control (weak form of `−Δy + y + u = 0` under homogeneous
/// Neumann conditions).
pub fn desired_state(fem: &FemMatrices) -> Vec<f64> {
    let u = reference_control(fem);
    desired_state_for_control(fem, &u)
}

/// Forward solve for an arbitrary nodal control.
pub fn desired_state_for_control(fem: &FemMatrices, control: &[f64]) -> Vec<f64> {
    let rhs: Vec<f64> = fem.mass.matvec(control).iter().map(|v| -v).collect();
    let factor = BandedCholesky::new(&fem.forward).expect("forward operator is SPD");
    factor.solve(&rhs)
}

/// Assemble the three-block KKT system
/// `[[βM, M, 0], [M, 0, L], [0, L, M_∂Ω]]` (block order control, adjoint,
/// state) and its right-hand side `(0, 0, M_∂Ω ŷ)`.
pub fn assemble_kkt(
    fem: &FemMatrices,
    beta: f64,
) -> Result<(BlockTridiagonalSystem, Vec<f64>), SaddleError> {
    assert!(beta > 0.0, "regularization parameter must be positive");
    let n = fem.n;
    let mass = fem.mass.to_sym_matrix();
    let diag = vec![mass.scaled(beta), SymMatrix::zeros(n), fem.boundary_mass.to_sym_matrix()];
    let to_mat = |c: &super::sparse::Csr| {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            let (cols, vals) = c.row(i);
            for (j, v) in cols.iter().zip(vals) {
                m.set(i, *j, *v);
            }
        }
        m
    };
    let offdiag = vec![to_mat(&fem.mass), to_mat(&fem.forward)];
    // blocks are valid by construction (βM SPD, 0 and M_∂Ω PSD, M and K+M
    // square nonsingular); skip the eigenvalue-based validation pass
    let sys = BlockTridiagonalSystem::new_unchecked(diag, offdiag)?;

    let yhat = desired_state(fem);
    let mut rhs = vec![0.0; 2 * n];
    rhs.extend(fem.boundary_mass.matvec(&yhat));
    Ok((sys, rhs))
}

/// The KKT coefficient operator in sparse form.
pub struct KktOperator<'a> {
    fem: &'a FemMatrices,
    beta: f64,
}

impl<'a> KktOperator<'a> {
    pub fn new(fem: &'a FemMatrices, beta: f64) -> Self {
        KktOperator { fem, beta }
    }
}

impl LinearOperator for KktOperator<'_> {
    fn dim(&self) -> usize {
        3 * self.fem.n
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.fem.n;
        let (u, rest) = v.split_at(n);
        let (p, y) = rest.split_at(n);
        let mut out = Vec::with_capacity(3 * n);
        // βM u + M p
        let mut row0 = self.fem.mass.matvec(u);
        let mp = self.fem.mass.matvec(p);
        for (a, b) in row0.iter_mut().zip(&mp) {
            *a = self.beta * *a + b;
        }
        out.extend(row0);
        // M u + L y
        let mut row1 = self.fem.mass.matvec(u);
        let ly = self.fem.forward.matvec(y);
        for (a, b) in row1.iter_mut().zip(&ly) {
            *a += b;
        }
        out.extend(row1);
        // L p + M_∂Ω y
        let mut row2 = self.fem.forward.matvec(p);
        let by = self.fem.boundary_mass.matvec(y);
        for (a, b) in row2.iter_mut().zip(&by) {
            *a += b;
        }
        out.extend(row2);
        out
    }
}

/// The inexact block-diagonal preconditioner inverse
/// `blkdiag(βM̂, β^{-1}M̂, βLM^{-1}L)^{-1}`: two semi-iteration applications
/// and one exact Schur action through the cached factorization of `L`.
pub struct PdecoPreconditioner<'a> {
    fem: &'a FemMatrices,
    cheb: ChebSolver<'a>,
    forward_factor: BandedCholesky,
    beta: f64,
}

impl<'a> PdecoPreconditioner<'a> {
    pub fn new(fem: &'a FemMatrices, beta: f64, cheb_steps: usize) -> Self {
        let cheb = ChebSolver::for_mass_matrix(&fem.mass, cheb_steps);
        let forward_factor = BandedCholesky::new(&fem.forward).expect("forward operator is SPD");
        PdecoPreconditioner { fem, cheb, forward_factor, beta }
    }

    /// `(βLM^{-1}L)^{-1} r = (1/β) L^{-1} M L^{-1} r`.
    fn schur2_inv(&self, r: &[f64]) -> Vec<f64> {
        let t = self.forward_factor.solve(r);
        let t = self.fem.mass.matvec(&t);
        let mut out = self.forward_factor.solve(&t);
        for v in &mut out {
            *v /= self.beta;
        }
        out
    }
}

impl LinearOperator for PdecoPreconditioner<'_> {
    fn dim(&self) -> usize {
        3 * self.fem.n
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.fem.n;
        let (r0, rest) = v.split_at(n);
        let (r1, r2) = rest.split_at(n);
        let mut out = Vec::with_capacity(3 * n);
        let mut z0 = self.cheb.apply(r0);
        for x in &mut z0 {
            *x /= self.beta;
        }
        out.extend(z0);
        let mut z1 = self.cheb.apply(r1);
        for x in &mut z1 {
            *x *= self.beta;
        }
        out.extend(z1);
        out.extend(self.schur2_inv(r2));
        out
    }
}

/// Indicators of the preconditioned KKT system: the semi-iteration interval
/// `[1−ω, 1+ω]` for the first block, its square and itself for the coupling
/// ranges, vanishing middle indicators, and a directly computed largest
/// eigenvalue of the pencil `(M_∂Ω, βLM^{-1}L)`.
pub fn pdeco_indicators(fem: &FemMatrices, beta: f64, cheb_steps: usize) -> IndicatorSet {
    let omega = cheb_omega(cheb_steps);
    let a_e0 = 1.0 - omega;
    let b_e0 = 1.0 + omega;
    let b_e2 = boundary_schur_max_eig(fem) / beta;
    IndicatorSet {
        a_e0,
        b_e0,
        a_e1: 0.0,
        b_e1: 0.0,
        a_e2: 0.0,
        b_e2,
        a_r1: a_e0 * a_e0,
        b_r1: b_e0 * b_e0,
        a_r2: a_e0,
        b_r2: b_e0,
    }
}

/// Largest eigenvalue of the pencil `(M_∂Ω, L M^{-1} L)` through the
/// symmetric operator `L_Mᵀ L^{-1} M_∂Ω L^{-1} L_M` (`M = L_M L_Mᵀ`), so two
/// forward-operator solves and one mass multiply per application.
pub fn boundary_schur_max_eig(fem: &FemMatrices) -> f64 {
    let forward_factor = BandedCholesky::new(&fem.forward).expect("forward operator is SPD");
    let mass_factor = BandedCholesky::new(&fem.mass).expect("mass matrix is SPD");
    let op = FnOperator::new(fem.n, |v: &[f64]| {
        let t = mass_factor.mul_l(v);
        let t = forward_factor.solve(&t);
        let t = fem.boundary_mass.matvec(&t);
        let t = forward_factor.solve(&t);
        mass_factor.mul_lt(&t)
    });
    let opts = LanczosOptions { seed: 9, ..Default::default() };
    let est = crate::linalg::extremal_eigs(&op, Which::Largest, &opts);
    assert!(est.converged, "boundary Schur pencil did not converge");
    est.largest
}

/// One full run: bounds from the indicators, extremal eigenvalues of the
/// preconditioned matrix (dense congruence below the dense-eigensolver cap,
/// pencil Lanczos above it), and the MINRES iteration count at `rel_tol`.
pub fn run_pdeco(
    divisions: usize,
    beta: f64,
    cheb_steps: usize,
    rel_tol: f64,
) -> Result<ExperimentReport, DspError> {
    let started = Instant::now();
    let fem = super::fem::assemble_fem(divisions);
    let n = fem.n;
    let indicators = pdeco_indicators(&fem, beta, cheb_steps);
    let bounds = TheoreticalBounds::Dsp(dsp_bounds(&indicators)?);

    let a_op = KktOperator::new(&fem, beta);
    let p_op = PdecoPreconditioner::new(&fem, beta, cheb_steps);

    let eigs = preconditioned_eigenvalues(&fem, beta, cheb_steps)?;
    let computed = cluster_extremes(&eigs);
    let violations = collect_violations(&eigs, &bounds);

    let yhat = desired_state(&fem);
    let mut rhs = vec![0.0; 2 * n];
    rhs.extend(fem.boundary_mass.matvec(&yhat));
    let solve = minres(&a_op, &p_op, &rhs, rel_tol, 10 * n);

    Ok(ExperimentReport {
        label: format!("pdeco divisions=2^{} beta={beta} cheb={cheb_steps}", divisions.ilog2()),
        seed: 0,
        system_dims: vec![n, n, n],
        theoretical_bounds: bounds,
        computed_extremes: computed,
        minres_iterations: solve.iterations,
        timing_seconds: started.elapsed().as_secs_f64(),
        violations,
    })
}

/// Eigenvalues (or converged Ritz values) of the preconditioned KKT matrix.
pub fn preconditioned_eigenvalues(
    fem: &FemMatrices,
    beta: f64,
    cheb_steps: usize,
) -> Result<Vec<f64>, DspError> {
    if 3 * fem.n <= DEFAULT.dense_eig_cap {
        dense_preconditioned_eigenvalues(fem, beta, cheb_steps)
    } else {
        let a_op = KktOperator::new(fem, beta);
        let p_op = PdecoPreconditioner::new(fem, beta, cheb_steps);
        let opts = LanczosOptions { max_dim: 420, seed: 5, ..Default::default() };
        let ritz = crate::linalg::pencil_lanczos(&a_op, &p_op, &opts);
        Ok(ritz.converged_values(DEFAULT.lanczos_rtol))
    }
}

/// Dense route: factor each preconditioner-inverse block as `C Cᵀ` and read
/// the spectrum off the congruence `Cᵀ A C`.
fn dense_preconditioned_eigenvalues(
    fem: &FemMatrices,
    beta: f64,
    cheb_steps: usize,
) -> Result<Vec<f64>, DspError> {
    let n = fem.n;
    let cheb = ChebSolver::for_mass_matrix(&fem.mass, cheb_steps);
    // M̂^{-1} densely, symmetrized against round-off
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(cheb.apply(&e));
    }
    let mhat_inv = SymMatrix::from_fn(n, |i, j| 0.5 * (cols[i][j] + cols[j][i]));
    drop(cols);

    let forward_factor = BandedCholesky::new(&fem.forward).expect("forward operator is SPD");
    // (L M^{-1} L)^{-1} = L^{-1} M L^{-1} column by column
    let mut s2cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let t = forward_factor.solve(&e);
        let t = fem.mass.matvec(&t);
        s2cols.push(forward_factor.solve(&t));
    }
    let schur2_inv = SymMatrix::from_fn(n, |i, j| 0.5 * (s2cols[i][j] + s2cols[j][i]));
    drop(s2cols);

    let c_mhat = cholesky(&mhat_inv)?;
    let c_schur = cholesky(&schur2_inv)?;

    // W = Cᵀ A C with C = blkdiag(C0, C1, C2),
    // C0 = β^{-1/2} C_mhat, C1 = β^{1/2} C_mhat, C2 = β^{-1/2} C_schur
    let w01 = congruence_block(&fem.mass, &c_mhat, &c_mhat); // C_mᵀ M C_m
    let w12 = congruence_block(&fem.forward, &c_mhat, &c_schur); // C_mᵀ L C_s
    let w22 = congruence_block(&fem.boundary_mass, &c_schur, &c_schur);

    let dim = 3 * n;
    let mut w = SymMatrix::zeros(dim);
    for i in 0..n {
        for j in 0..=i {
            // block (0,0): β · (1/β) C_mᵀ M C_m = C_mᵀ M C_m
            w.set(i, j, w01.get(i, j));
            // block (2,2): (1/β) C_sᵀ M_∂Ω C_s
            w.set(2 * n + i, 2 * n + j, w22.get(i, j) / beta);
        }
        for j in 0..n {
            // block (1,0): C1ᵀ M C0 = (β^{1/2}·β^{-1/2}) C_mᵀ M C_m
            w.set(n + i, j, w01.get(i, j));
            // block (2,1): C2ᵀ L C1 = (β^{-1/2}·β^{1/2}) C_sᵀ L C_m → transpose of w12
            w.set(2 * n + i, n + j, w12.get(j, i));
        }
    }
    Ok(sym_eigvalues(&w)?)
}

/// `Caᵀ S Cb` for sparse symmetric `S` and dense lower-triangular factors.
fn congruence_block(
    s: &super::sparse::Csr,
    ca: &CholeskyFactor,
    cb: &CholeskyFactor,
) -> Mat {
    let n = s.nrows();
    // t = S · Cb (sparse × dense, column blocks)
    let mut t = Mat::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| cb.lower().get(i, j)).collect();
        let y = s.matvec(&col);
        for i in 0..n {
            t.set(i, j, y[i]);
        }
    }
    // Caᵀ · t
    let ca_t = ca.lower().transpose();
    ca_t.matmul(&t)
}
