//! Symmetric block-tridiagonal multiple saddle-point systems, their
//! Schur-complement chains, the block-diagonal preconditioner, and the
//! symmetrized preconditioned operator.

use crate::linalg::{
    cholesky, sym_eigvalues, CholeskyFactor, LinalgError, LinearOperator, Mat, SymMatrix,
};
use crate::tol::DEFAULT;
use std::fmt;

/// Errors from system construction and validation.
#[derive(Clone, Debug)]
pub enum SaddleError {
    ShapeMismatch { detail: String },
    /// One of the structural assumptions failed: first block not positive
    /// definite, a later block not positive semi-definite, a coupling block
    /// rank-deficient, or block sizes not non-increasing.
    AssumptionViolated { detail: String },
    Linalg(LinalgError),
}

impl fmt::Display for SaddleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SaddleError::ShapeMismatch { detail } => write!(f, "shape mismatch: {detail}"),
            SaddleError::AssumptionViolated { detail } => {
                write!(f, "assumption violated: {detail}")
            }
            SaddleError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SaddleError {}

impl From<LinalgError> for SaddleError {
    fn from(e: LinalgError) -> Self {
        SaddleError::Linalg(e)
    }
}

/// A multiple saddle-point system: diagonal blocks `A_0, …, A_N` and
/// couplings `B_1, …, B_N` (`B_k` of shape `n_k × n_{k−1}`). The assembled
/// matrix carries the alternating diagonal signs `(−1)^k A_k`.
#[derive(Clone, Debug)]
pub struct BlockTridiagonalSystem {
    diag: Vec<SymMatrix>,
    offdiag: Vec<Mat>,
    sizes: Vec<usize>,
}

impl BlockTridiagonalSystem {
    /// Validated construction.
    pub fn new(diag: Vec<SymMatrix>, offdiag: Vec<Mat>) -> Result<Self, SaddleError> {
        let sys = Self::new_unchecked(diag, offdiag)?;
        sys.validate()?;
        Ok(sys)
    }

    /// Construction with shape checks only; structural assumptions are the
    /// caller's responsibility (perturbed systems relax them deliberately).
    pub fn new_unchecked(diag: Vec<SymMatrix>, offdiag: Vec<Mat>) -> Result<Self, SaddleError> {
        if diag.is_empty() {
            return Err(SaddleError::ShapeMismatch { detail: "no diagonal blocks".into() });
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(SaddleError::ShapeMismatch {
                detail: format!(
                    "{} diagonal blocks need {} couplings, got {}",
                    diag.len(),
                    diag.len() - 1,
                    offdiag.len()
                ),
            });
        }
        for (k, b) in offdiag.iter().enumerate() {
            if b.nrows() != diag[k + 1].n() || b.ncols() != diag[k].n() {
                return Err(SaddleError::ShapeMismatch {
                    detail: format!(
                        "coupling {} is {}x{}, expected {}x{}",
                        k + 1,
                        b.nrows(),
                        b.ncols(),
                        diag[k + 1].n(),
                        diag[k].n()
                    ),
                });
            }
        }
        let sizes = diag.iter().map(|a| a.n()).collect();
        Ok(BlockTridiagonalSystem { diag, offdiag, sizes })
    }

    /// Check the structural assumptions: `A_0` positive definite, `A_k`
    /// positive semi-definite, sizes non-increasing, couplings of full row
    /// rank.
    pub fn validate(&self) -> Result<(), SaddleError> {
        for w in self.sizes.windows(2) {
            if w[1] > w[0] {
                return Err(SaddleError::AssumptionViolated {
                    detail: format!("block sizes increase: {} -> {}", w[0], w[1]),
                });
            }
        }
        if cholesky(&self.diag[0]).is_err() {
            return Err(SaddleError::AssumptionViolated {
                detail: "first diagonal block is not positive definite".into(),
            });
        }
        for (k, a) in self.diag.iter().enumerate().skip(1) {
            let scale = a.max_abs();
            if scale == 0.0 {
                continue; // zero block is positive semi-definite
            }
            let min = sym_eigvalues(a)?[0];
            if min < -DEFAULT.semidef_rel_slack * scale {
                return Err(SaddleError::AssumptionViolated {
                    detail: format!("diagonal block {k} has eigenvalue {min:e}"),
                });
            }
        }
        for (k, b) in self.offdiag.iter().enumerate() {
            // full row rank through the singular values of B Bᵀ; eigenvalues
            // of the Gram matrix below its machine-noise floor count as zero
            let bbt = gram_rows(b);
            let eigs = sym_eigvalues(&bbt)?;
            let lam_max = eigs[eigs.len() - 1].max(0.0);
            let noise = b.ncols() as f64 * f64::EPSILON * lam_max;
            let lam_min = if eigs[0] <= noise { 0.0 } else { eigs[0] };
            let (min, max) = (lam_min.sqrt(), lam_max.sqrt());
            if min <= DEFAULT.rank_rel_tol * max {
                return Err(SaddleError::AssumptionViolated {
                    detail: format!(
                        "coupling {} is rank deficient (σ_min/σ_max = {:e})",
                        k + 1,
                        min / max
                    ),
                });
            }
        }
        Ok(())
    }

    /// `N` (block count minus one).
    pub fn big_n(&self) -> usize {
        self.diag.len() - 1
    }

    pub fn n_blocks(&self) -> usize {
        self.diag.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    pub fn diag_block(&self, k: usize) -> &SymMatrix {
        &self.diag[k]
    }

    /// `B_k` for `k = 1, …, N`.
    pub fn offdiag_block(&self, k: usize) -> &Mat {
        &self.offdiag[k - 1]
    }

    /// Expected positive-eigenvalue count `Σ_{k even} n_k` from the inertia
    /// of the congruent block-diagonal factorization.
    pub fn positive_inertia(&self) -> usize {
        self.sizes.iter().step_by(2).sum()
    }

    /// Dense assembled matrix with diagonal signs `(−1)^k A_k` and couplings
    /// `B_k` below the diagonal.
    pub fn assemble_dense(&self) -> SymMatrix {
        let n = self.total_dim();
        let offsets = self.offsets();
        let mut out = SymMatrix::zeros(n);
        for (k, a) in self.diag.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let base = offsets[k];
            for i in 0..a.n() {
                for j in 0..=i {
                    out.set(base + i, base + j, sign * a.get(i, j));
                }
            }
        }
        for (k, b) in self.offdiag.iter().enumerate() {
            let (row_base, col_base) = (offsets[k + 1], offsets[k]);
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    out.set(row_base + i, col_base + j, b.get(i, j));
                }
            }
        }
        out
    }

    /// Matrix-free action of the assembled matrix.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.total_dim(), "dimension mismatch");
        let offsets = self.offsets();
        let mut out = vec![0.0; v.len()];
        for (k, a) in self.diag.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let base = offsets[k];
            let seg = &v[base..base + a.n()];
            let y = a.matvec(seg);
            for (i, val) in y.into_iter().enumerate() {
                out[base + i] += sign * val;
            }
        }
        for (k, b) in self.offdiag.iter().enumerate() {
            let (rb, cb) = (offsets[k + 1], offsets[k]);
            let y = b.matvec(&v[cb..cb + b.ncols()]);
            for (i, val) in y.into_iter().enumerate() {
                out[rb + i] += val;
            }
            let yt = b.t_matvec(&v[rb..rb + b.nrows()]);
            for (j, val) in yt.into_iter().enumerate() {
                out[cb + j] += val;
            }
        }
        out
    }

    pub fn offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.sizes.len());
        let mut acc = 0;
        for &s in &self.sizes {
            offsets.push(acc);
            acc += s;
        }
        offsets
    }

    /// View the assembled matrix as a [`LinearOperator`].
    pub fn operator(&self) -> SystemOperator<'_> {
        SystemOperator { sys: self }
    }
}

/// Gram matrix `B Bᵀ` (row Gram) of a rectangular block.
fn gram_rows(b: &Mat) -> SymMatrix {
    SymMatrix::from_fn(b.nrows(), |i, j| {
        crate::linalg::vecops::dot(b.row(i), b.row(j))
    })
}

/// [`LinearOperator`] view of an assembled block system.
pub struct SystemOperator<'a> {
    sys: &'a BlockTridiagonalSystem,
}

impl LinearOperator for SystemOperator<'_> {
    fn dim(&self) -> usize {
        self.sys.total_dim()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.sys.apply(v)
    }
}

/// Chain of symmetric positive definite Schur complements with cached
/// Cholesky factors; doubles as the block-diagonal preconditioner.
#[derive(Clone, Debug)]
pub struct SchurChain {
    complements: Vec<SymMatrix>,
    factors: Vec<CholeskyFactor>,
}

impl SchurChain {
    /// The exact chain `S_0 = A_0`, `S_k = A_k + B_k S_{k−1}^{-1} B_kᵀ`.
    pub fn exact(sys: &BlockTridiagonalSystem) -> Result<Self, SaddleError> {
        let mut complements: Vec<SymMatrix> = Vec::with_capacity(sys.n_blocks());
        let mut factors: Vec<CholeskyFactor> = Vec::with_capacity(sys.n_blocks());
        for k in 0..sys.n_blocks() {
            let s = if k == 0 {
                sys.diag_block(0).clone()
            } else {
                let b = sys.offdiag_block(k);
                let x = factors[k - 1].forward_mat(&b.transpose());
                sys.diag_block(k).add(&SymMatrix::gram(&x))
            };
            let f = cholesky(&s).map_err(|e| match e {
                LinalgError::NotPositiveDefinite { pivot, .. } => {
                    SaddleError::AssumptionViolated {
                        detail: format!("Schur complement {k} not positive definite (pivot {pivot:e})"),
                    }
                }
                other => SaddleError::Linalg(other),
            })?;
            complements.push(s);
            factors.push(f);
        }
        Ok(SchurChain { complements, factors })
    }

    /// Wrap externally supplied (e.g. approximate) SPD blocks as a chain.
    pub fn from_blocks(blocks: Vec<SymMatrix>) -> Result<Self, SaddleError> {
        let mut factors = Vec::with_capacity(blocks.len());
        for (k, s) in blocks.iter().enumerate() {
            factors.push(cholesky(s).map_err(|e| match e {
                LinalgError::NotPositiveDefinite { pivot, .. } => SaddleError::AssumptionViolated {
                    detail: format!("chain block {k} not positive definite (pivot {pivot:e})"),
                },
                other => SaddleError::Linalg(other),
            })?);
        }
        Ok(SchurChain { complements: blocks, factors })
    }

    pub fn len(&self) -> usize {
        self.complements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complements.is_empty()
    }

    pub fn block(&self, k: usize) -> &SymMatrix {
        &self.complements[k]
    }

    pub fn factor(&self, k: usize) -> &CholeskyFactor {
        &self.factors[k]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.complements.iter().map(|s| s.n()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.complements.iter().map(|s| s.n()).sum()
    }

    /// Blockwise `S_k^{-1}` action of the preconditioner inverse.
    pub fn precond_apply_inv(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.total_dim(), "dimension mismatch");
        let mut out = Vec::with_capacity(v.len());
        let mut base = 0;
        for f in &self.factors {
            let n = f.n();
            out.extend(f.solve(&v[base..base + n]));
            base += n;
        }
        out
    }

    /// Dense block-diagonal preconditioner matrix.
    pub fn precond_dense(&self) -> SymMatrix {
        let n = self.total_dim();
        let mut out = SymMatrix::zeros(n);
        let mut base = 0;
        for s in &self.complements {
            for i in 0..s.n() {
                for j in 0..=i {
                    out.set(base + i, base + j, s.get(i, j));
                }
            }
            base += s.n();
        }
        out
    }

    /// [`LinearOperator`] view of the preconditioner inverse.
    pub fn precond_inv_operator(&self) -> PrecondInvOperator<'_> {
        PrecondInvOperator { chain: self }
    }
}

/// [`LinearOperator`] applying `P_D^{-1}` blockwise.
pub struct PrecondInvOperator<'a> {
    chain: &'a SchurChain,
}

impl LinearOperator for PrecondInvOperator<'_> {
    fn dim(&self) -> usize {
        self.chain.total_dim()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.chain.precond_apply_inv(v)
    }
}

/// The symmetrized preconditioned system: unit-normalized blocks
/// `R_k = L_k^{-1} B_k L_{k−1}^{-T}` and `E_k = L_k^{-1} A_k L_k^{-T}`
/// (Cholesky congruences, spectrally equivalent to the symmetric square-root
/// normalization), assembled with the alternating sign pattern.
#[derive(Clone, Debug)]
pub struct SymmetrizedSystem {
    r_blocks: Vec<Mat>,
    e_blocks: Vec<SymMatrix>,
    sizes: Vec<usize>,
}

/// Build the symmetrized operator blocks from a system and an SPD chain.
pub fn symmetrize(
    sys: &BlockTridiagonalSystem,
    chain: &SchurChain,
) -> Result<SymmetrizedSystem, SaddleError> {
    assert_eq!(chain.len(), sys.n_blocks(), "chain length mismatch");
    let mut r_blocks = Vec::with_capacity(sys.big_n());
    let mut e_blocks = Vec::with_capacity(sys.n_blocks());
    for k in 0..sys.n_blocks() {
        e_blocks.push(chain.factor(k).reduce_pencil(sys.diag_block(k)));
        if k >= 1 {
            // R_k = L_k^{-1} B_k L_{k-1}^{-T}
            let b = sys.offdiag_block(k);
            let t = chain.factor(k - 1).forward_mat(&b.transpose()); // L_{k-1}^{-1} B^T
            let r = chain.factor(k).forward_mat(&t.transpose()); // L_k^{-1} B L_{k-1}^{-T}
            r_blocks.push(r);
        }
    }
    Ok(SymmetrizedSystem { r_blocks, e_blocks, sizes: sys.sizes().to_vec() })
}

impl SymmetrizedSystem {
    /// `R_k` for `k = 1, …, N`.
    pub fn r_block(&self, k: usize) -> &Mat {
        &self.r_blocks[k - 1]
    }

    pub fn e_block(&self, k: usize) -> &SymMatrix {
        &self.e_blocks[k]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn total_dim(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Action of the symmetrized matrix `Q` (block tridiagonal with diagonal
    /// `(−1)^k E_k` and couplings `R_k`).
    pub fn q_apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.total_dim(), "dimension mismatch");
        let mut offsets = Vec::with_capacity(self.sizes.len());
        let mut acc = 0;
        for &s in &self.sizes {
            offsets.push(acc);
            acc += s;
        }
        let mut out = vec![0.0; v.len()];
        for (k, e) in self.e_blocks.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let base = offsets[k];
            let y = e.matvec(&v[base..base + e.n()]);
            for (i, val) in y.into_iter().enumerate() {
                out[base + i] += sign * val;
            }
        }
        for (k, r) in self.r_blocks.iter().enumerate() {
            let (rb, cb) = (offsets[k + 1], offsets[k]);
            let y = r.matvec(&v[cb..cb + r.ncols()]);
            for (i, val) in y.into_iter().enumerate() {
                out[rb + i] += val;
            }
            let yt = r.t_matvec(&v[rb..rb + r.nrows()]);
            for (j, val) in yt.into_iter().enumerate() {
                out[cb + j] += val;
            }
        }
        out
    }

    /// Dense assembled `Q`.
    pub fn q_dense(&self) -> SymMatrix {
        let n = self.total_dim();
        let mut offsets = Vec::with_capacity(self.sizes.len());
        let mut acc = 0;
        for &s in &self.sizes {
            offsets.push(acc);
            acc += s;
        }
        let mut out = SymMatrix::zeros(n);
        for (k, e) in self.e_blocks.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let base = offsets[k];
            for i in 0..e.n() {
                for j in 0..=i {
                    out.set(base + i, base + j, sign * e.get(i, j));
                }
            }
        }
        for (k, r) in self.r_blocks.iter().enumerate() {
            let (rb, cb) = (offsets[k + 1], offsets[k]);
            for i in 0..r.nrows() {
                for j in 0..r.ncols() {
                    out.set(rb + i, cb + j, r.get(i, j));
                }
            }
        }
        out
    }

    /// `‖R_k R_kᵀ + E_k − I‖_F` for each level `k ≥ 1` (the defining
    /// normalization identity of exact chains).
    pub fn rre_defects(&self) -> Vec<f64> {
        (1..self.sizes.len())
            .map(|k| {
                let r = self.r_block(k);
                let mut m = SymMatrix::gram(&r.transpose()); // R Rᵀ
                m = m.add(self.e_block(k));
                m.add_scaled_identity(-1.0);
                m.frob_norm()
            })
            .collect()
    }

    /// [`LinearOperator`] view of `Q`.
    pub fn q_operator(&self) -> QOperator<'_> {
        QOperator { sym: self }
    }
}

/// [`LinearOperator`] applying the symmetrized matrix.
pub struct QOperator<'a> {
    sym: &'a SymmetrizedSystem,
}

impl LinearOperator for QOperator<'_> {
    fn dim(&self) -> usize {
        self.sym.total_dim()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.sym.q_apply(v)
    }
}

/// The perturbed Schur complements `S̃_0 = A_0`,
/// `S̃_i = A_i + B_i Ŝ_{i−1}^{-1} B_iᵀ` that an approximate chain `Ŝ` should
/// be measured against.
pub fn tilde_chain(
    sys: &BlockTridiagonalSystem,
    approx: &SchurChain,
) -> Result<Vec<SymMatrix>, SaddleError> {
    assert_eq!(approx.len(), sys.n_blocks(), "chain length mismatch");
    let mut tilde = Vec::with_capacity(sys.n_blocks());
    tilde.push(sys.diag_block(0).clone());
    for k in 1..sys.n_blocks() {
        let b = sys.offdiag_block(k);
        let x = approx.factor(k - 1).forward_mat(&b.transpose());
        tilde.push(sys.diag_block(k).add(&SymMatrix::gram(&x)));
    }
    Ok(tilde)
}

/// The backward-analysis matrix: the system whose exact Schur complements are
/// the approximate chain, obtained by shifting each diagonal block to
/// `Â_k = A_k + Ŝ_k − S̃_k`. Validation is relaxed; the perturbation
/// hypotheses are checked separately.
pub fn perturbed_matrix(
    sys: &BlockTridiagonalSystem,
    approx: &SchurChain,
) -> Result<BlockTridiagonalSystem, SaddleError> {
    let tilde = tilde_chain(sys, approx)?;
    let diag: Vec<SymMatrix> = (0..sys.n_blocks())
        .map(|k| sys.diag_block(k).add(&approx.block(k).sub(&tilde[k])))
        .collect();
    BlockTridiagonalSystem::new_unchecked(diag, (1..=sys.big_n()).map(|k| sys.offdiag_block(k).clone()).collect())
}
