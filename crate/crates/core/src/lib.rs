//! Eigenvalue inclusion bounds for symmetric block-tridiagonal multiple
//! saddle-point matrices preconditioned by block-diagonal Schur-complement
//! preconditioners.
//!
//! The crate is organized around the pipeline
//!
//! 1. [`saddle`]: block systems, Schur-complement chains and the symmetrized
//!    preconditioned operator,
//! 2. [`poly`]: the three-term polynomial family whose zeros localize the
//!    eigenvalues of the exactly preconditioned matrix, together with the
//!    closed-form interval hull,
//! 3. [`perturb`]: Minkowski-shifted intervals for inexact preconditioners,
//! 4. [`dsp`]: refined quadratic/cubic root bounds for double saddle-point
//!    systems with inexact Schur complements,
//! 5. [`pdeco`]: a P1 finite-element optimal-control test problem driven by
//!    Chebyshev semi-iteration,
//! 6. [`experiments`]: randomized validation drivers and report emission.
//!
//! [`linalg`] provides the self-contained dense kernels (Cholesky, symmetric
//! and tridiagonal eigensolvers, Lanczos, MINRES) everything else builds on.

pub mod dsp;
pub mod io;
pub mod linalg;
pub mod perturb;
pub mod poly;
pub mod saddle;
pub mod tol;

pub use tol::Tolerances;
