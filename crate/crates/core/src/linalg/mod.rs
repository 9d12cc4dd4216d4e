//! Self-contained dense and operator-based numerical kernels: Cholesky
//! factorization, symmetric and tridiagonal eigensolvers, extremal-eigenvalue
//! Lanczos iteration, and preconditioned MINRES.

mod cholesky;
mod dense;
mod eig;
mod lanczos;
mod minres;
mod operator;

pub use cholesky::{cholesky, CholeskyFactor};
pub use dense::{vecops, Mat, SymMatrix};
pub use eig::{
    gen_eig_all, gen_eig_extremes, sym_eig, sym_eigvalues, tridiag_eig, tridiag_eig_vectors,
    SymEig,
};
pub use lanczos::{
    extremal_eigs, pencil_lanczos, ExtremalEigs, LanczosOptions, PencilRitz, RitzPair, Which,
};
pub use minres::{minres, SolveReport};
pub use operator::{DiagOperator, FnOperator, LinearOperator, ScaledOperator};

use std::fmt;

/// Errors produced by the numerical kernels.
#[derive(Clone, Debug, PartialEq)]
pub enum LinalgError {
    /// A Cholesky pivot fell below the threshold: the matrix is not positive
    /// definite (or an assumption feeding it was violated).
    NotPositiveDefinite { pivot: f64, index: usize },
    /// The dense eigensolver was asked for a matrix above its size cap.
    DimensionCap { n: usize, cap: usize },
    /// An iterative eigensolver ran out of Krylov space before converging.
    NoConvergence { steps: usize, best: f64 },
    /// Incompatible dimensions.
    ShapeMismatch { expected: usize, got: usize },
    /// QL iteration failed to deflate an eigenvalue (pathological input).
    EigIterationLimit { index: usize },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NotPositiveDefinite { pivot, index } => {
                write!(f, "matrix not positive definite: pivot {pivot:e} at index {index}")
            }
            LinalgError::DimensionCap { n, cap } => {
                write!(f, "dense eigensolver cap exceeded: n = {n} > {cap}")
            }
            LinalgError::NoConvergence { steps, best } => {
                write!(f, "no convergence after {steps} Lanczos steps (best estimate {best:e})")
            }
            LinalgError::ShapeMismatch { expected, got } => {
                write!(f, "shape mismatch: expected {expected}, got {got}")
            }
            LinalgError::EigIterationLimit { index } => {
                write!(f, "QL iteration limit reached at eigenvalue {index}")
            }
        }
    }
}

impl std::error::Error for LinalgError {}
