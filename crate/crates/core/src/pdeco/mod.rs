//! An optimal-control test problem on the unit square: P1 finite-element
//! assembly, the three-block KKT system, Chebyshev semi-iteration as an
//! inexact mass-matrix inverse, and the resulting eigenvalue bounds,
//! computed spectra, and MINRES iteration counts.

pub mod band;
pub mod cheb;
pub mod driver;
pub mod fem;
pub mod sparse;

pub use band::BandedCholesky;
pub use cheb::{cheb_omega, chebyshev_t, ChebSolver, ChebyshevConfig};
pub use driver::{
    assemble_kkt, boundary_schur_max_eig, desired_state, pdeco_indicators,
    preconditioned_eigenvalues, reference_control, run_pdeco, KktOperator, PdecoPreconditioner,
};
pub use fem::{assemble_fem, node_coords, FemMatrices};
pub use sparse::Csr;
