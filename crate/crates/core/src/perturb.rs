//! Eigenvalue localization for inexactly preconditioned systems of arbitrary
//! block count: the interval hull of the exactly preconditioned backward
//! system, shifted by the extremes of the relative Schur approximation
//! errors (a Minkowski sum of the hull with `[σ⁻, σ⁺]`).

use crate::linalg::{gen_eig_extremes, sym_eigvalues};
use crate::poly::BoundsInterval;
use crate::saddle::{tilde_chain, BlockTridiagonalSystem, SaddleError, SchurChain};
use crate::tol::DEFAULT;
use serde::{Deserialize, Serialize};

/// Extremes `σ⁻ ≤ σ⁺` of the eigenvalues of
/// `(−1)^{k+1}(I − Ŝ_k^{-1} S̃_k)` over all levels `k`; both vanish when the
/// chain is exact.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationRange {
    pub sigma_minus: f64,
    pub sigma_plus: f64,
}

/// Minkowski-shifted bounds: interval lows move by `σ⁻`, highs by `σ⁺`. The
/// raw sum is reported without clamping; `contains_zero` flags the
/// (uninformative but still valid) case where zero enters the union.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiBounds {
    pub sigma_minus: f64,
    pub sigma_plus: f64,
    pub base_interval: BoundsInterval,
    pub shifted_interval: ShiftedInterval,
    pub contains_zero: bool,
}

/// Endpoints of the shifted union; unlike [`BoundsInterval`] the sign
/// pattern may degenerate, so no invariant is enforced.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftedInterval {
    pub neg_lo: f64,
    pub neg_hi: f64,
    pub pos_lo: f64,
    pub pos_hi: f64,
}

impl MinkowskiBounds {
    /// Whether `x` lies in the shifted union, with `slack`.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        let s = &self.shifted_interval;
        (x >= s.neg_lo - slack && x <= s.neg_hi + slack)
            || (x >= s.pos_lo - slack && x <= s.pos_hi + slack)
    }
}

/// Compute `σ⁻`, `σ⁺` for an approximate chain against the perturbed targets
/// `S̃_k`. For each level, the extremes of the pencil `(S̃_k, Ŝ_k)` are mapped
/// through `λ ↦ (−1)^{k+1}(1 − λ)`; eigenvalues are real by congruence.
pub fn sigma_range(
    approx: &SchurChain,
    sys: &BlockTridiagonalSystem,
) -> Result<PerturbationRange, SaddleError> {
    let tilde = tilde_chain(sys, approx)?;
    let mut sigma_minus = f64::INFINITY;
    let mut sigma_plus = f64::NEG_INFINITY;
    for (k, tilde_k) in tilde.iter().enumerate() {
        let (lo, hi) = gen_eig_extremes(tilde_k, approx.block(k))?;
        let (a, b) = if k % 2 == 0 {
            (lo - 1.0, hi - 1.0) // (−1)^{k+1}(1−λ) = λ − 1 for even k
        } else {
            (1.0 - hi, 1.0 - lo)
        };
        sigma_minus = sigma_minus.min(a);
        sigma_plus = sigma_plus.max(b);
    }
    Ok(PerturbationRange { sigma_minus, sigma_plus })
}

/// Shift the base interval hull by the perturbation range.
pub fn minkowski_bounds(base: &BoundsInterval, range: &PerturbationRange) -> MinkowskiBounds {
    let shifted = ShiftedInterval {
        neg_lo: base.neg_lo + range.sigma_minus,
        neg_hi: base.neg_hi + range.sigma_plus,
        pos_lo: base.pos_lo + range.sigma_minus,
        pos_hi: base.pos_hi + range.sigma_plus,
    };
    let contains_zero = shifted.neg_hi >= 0.0 || shifted.pos_lo <= 0.0;
    MinkowskiBounds {
        sigma_minus: range.sigma_minus,
        sigma_plus: range.sigma_plus,
        base_interval: *base,
        shifted_interval: shifted,
        contains_zero,
    }
}

/// Check the perturbation-theorem hypotheses on the backward system: every
/// shifted diagonal block `Â_k` positive semi-definite and `Â_0` positive
/// definite. Violations void containment, so they are reported explicitly.
pub fn hypotheses_hold(hat: &BlockTridiagonalSystem) -> Result<bool, SaddleError> {
    let eigs = sym_eigvalues(hat.diag_block(0))?;
    if eigs[0] <= 0.0 {
        return Ok(false);
    }
    for k in 1..hat.n_blocks() {
        let a = hat.diag_block(k);
        let scale = a.max_abs();
        if scale == 0.0 {
            continue;
        }
        let min = sym_eigvalues(a)?[0];
        if min < -DEFAULT.semidef_rel_slack * scale {
            return Ok(false);
        }
    }
    Ok(true)
}
