//! Centralized numerical tolerances.
//!
//! Every threshold used by the kernels and validation drivers lives here so
//! that no module carries its own ad-hoc magic numbers.

/// Tolerance configuration shared by all numerical routines.
#[derive(Clone, Debug)]
pub struct Tolerances {
    /// Cholesky pivot threshold, relative to the largest diagonal entry.
    pub cholesky_pivot_rel: f64,
    /// Largest dimension accepted by the dense symmetric eigensolver.
    pub dense_eig_cap: usize,
    /// Residual bound `‖Mv − λv‖ ≤ tol·‖M‖` for dense eigenpairs.
    pub sym_eig_residual: f64,
    /// Orthonormality defect allowed in dense eigenvector matrices.
    pub sym_eig_orthonormality: f64,
    /// Relative accuracy requested from Lanczos extremal eigenvalues.
    pub lanczos_rtol: f64,
    /// Maximum Krylov dimension for Lanczos (`min(n, this)`).
    pub lanczos_max_dim: usize,
    /// Relative slack when checking positive semi-definiteness of blocks.
    pub semidef_rel_slack: f64,
    /// Relative smallest-singular-value threshold for full-rank checks.
    pub rank_rel_tol: f64,
    /// Relative tolerance on Schur-chain and congruence identities.
    pub chain_rel: f64,
    /// Relative containment slack when comparing eigenvalues to bounds.
    pub containment_rel: f64,
    /// Absolute threshold below which a cubic coefficient degenerates.
    pub degenerate_cubic: f64,
}

impl Tolerances {
    /// The defaults used throughout the crate.
    pub const fn standard() -> Self {
        Tolerances {
            cholesky_pivot_rel: 1e-14,
            dense_eig_cap: 4000,
            sym_eig_residual: 1e-9,
            sym_eig_orthonormality: 1e-10,
            lanczos_rtol: 1e-8,
            lanczos_max_dim: 400,
            semidef_rel_slack: 1e-10,
            rank_rel_tol: 1e-10,
            chain_rel: 1e-10,
            containment_rel: 1e-8,
            degenerate_cubic: 1e-14,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::standard()
    }
}

/// The default tolerance record.
pub static DEFAULT: Tolerances = Tolerances::standard();
