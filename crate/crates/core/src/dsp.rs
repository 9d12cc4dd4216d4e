//! Refined eigenvalue bounds for double saddle-point systems (three blocks)
//! with inexact Schur complements: field-of-value indicators, the quadratic
//! roots `λ±`, the cubic roots `μ_a < μ_b < μ_c`, the final inclusion
//! intervals, and the comparison values they refine.

use crate::linalg::{gen_eig_extremes, LinalgError, SymMatrix};
use crate::poly::BoundsInterval;
use crate::saddle::{BlockTridiagonalSystem, SaddleError, SchurChain};
use crate::tol::DEFAULT;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Errors from the double saddle-point analysis.
#[derive(Clone, Debug)]
pub enum DspError {
    /// The system does not have exactly three blocks.
    WrongBlockCount { got: usize },
    /// The cubic degenerates (`γ_R^{(2)}` at zero); the limiting roots
    /// `(λ−, γ_E^{(2)}, λ+)` are carried in the error.
    DegenerateCubic { limit: (f64, f64, f64) },
    Saddle(String),
    Linalg(LinalgError),
}

impl fmt::Display for DspError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DspError::WrongBlockCount { got } => {
                write!(f, "double saddle-point analysis needs 3 blocks, got {got}")
            }
            DspError::DegenerateCubic { limit } => {
                write!(f, "cubic degenerates; limiting roots {limit:?}")
            }
            DspError::Saddle(d) => write!(f, "{d}"),
            DspError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DspError {}

impl From<LinalgError> for DspError {
    fn from(e: LinalgError) -> Self {
        DspError::Linalg(e)
    }
}

impl From<SaddleError> for DspError {
    fn from(e: SaddleError) -> Self {
        DspError::Saddle(e.to_string())
    }
}

/// The ten extremal indicators: eigenvalue ranges of
/// `E_i = Ŝ_i^{-1/2} A_i Ŝ_i^{-1/2}` (`i = 0, 1, 2`) and of
/// `R_i R_iᵀ = Ŝ_i^{-1/2} B_i Ŝ_{i−1}^{-1} B_iᵀ Ŝ_i^{-1/2}` (`i = 1, 2`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSet {
    pub a_e0: f64,
    pub b_e0: f64,
    pub a_e1: f64,
    pub b_e1: f64,
    pub a_e2: f64,
    pub b_e2: f64,
    pub a_r1: f64,
    pub b_r1: f64,
    pub a_r2: f64,
    pub b_r2: f64,
}

impl IndicatorSet {
    /// Basic sanity of the ranges: `α_E^{(0)} > 0`, the other `E` lower ends
    /// non-negative, `R` lower ends positive, and each `α ≤ β`.
    pub fn validate(&self) -> Result<(), DspError> {
        let ordered = self.a_e0 <= self.b_e0
            && self.a_e1 <= self.b_e1
            && self.a_e2 <= self.b_e2
            && self.a_r1 <= self.b_r1
            && self.a_r2 <= self.b_r2;
        if !ordered || self.a_e0 <= 0.0 || self.a_e1 < 0.0 || self.a_e2 < 0.0
            || self.a_r1 <= 0.0 || self.a_r2 <= 0.0
        {
            return Err(DspError::Saddle(format!("invalid indicator set {self:?}")));
        }
        Ok(())
    }
}

/// Final inclusion bounds plus the two comparison endpoints they refine.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DspBounds {
    pub neg_lo: f64,
    pub neg_hi: f64,
    pub pos_lo: f64,
    pub pos_hi: f64,
    pub bradley_neg_hi: f64,
    pub bradley_pos_lo: f64,
}

impl DspBounds {
    /// Whether `x` lies in the union of the two intervals, with `slack`.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        (x >= self.neg_lo - slack && x <= self.neg_hi + slack)
            || (x >= self.pos_lo - slack && x <= self.pos_hi + slack)
    }
}

/// Indicators of a three-block system under an SPD approximate chain.
pub fn compute_indicators(
    sys: &BlockTridiagonalSystem,
    approx: &SchurChain,
) -> Result<IndicatorSet, DspError> {
    if sys.n_blocks() != 3 {
        return Err(DspError::WrongBlockCount { got: sys.n_blocks() });
    }
    assert_eq!(approx.len(), 3, "chain must have 3 blocks");

    let e_extremes = |i: usize| -> Result<(f64, f64), DspError> {
        let a = sys.diag_block(i);
        if a.max_abs() == 0.0 {
            return Ok((0.0, 0.0));
        }
        Ok(gen_eig_extremes(a, approx.block(i))?)
    };
    let (a_e0, b_e0) = e_extremes(0)?;
    let (a_e1, b_e1) = e_extremes(1)?;
    let (a_e2, b_e2) = e_extremes(2)?;

    let r_extremes = |i: usize| -> Result<(f64, f64), DspError> {
        let b = sys.offdiag_block(i);
        let x = approx.factor(i - 1).forward_mat(&b.transpose());
        let g = SymMatrix::gram(&x); // B Ŝ_{i−1}^{-1} Bᵀ
        Ok(gen_eig_extremes(&g, approx.block(i))?)
    };
    let (a_r1, b_r1) = r_extremes(1)?;
    let (a_r2, b_r2) = r_extremes(2)?;

    let set = IndicatorSet { a_e0, b_e0, a_e1, b_e1, a_e2, b_e2, a_r1, b_r1, a_r2, b_r2 };
    set.validate()?;
    Ok(set)
}

/// The quadratic `p(λ) = λ² − λ(γ_E^{(0)} − γ_E^{(1)}) − γ_R^{(1)} − γ_E^{(0)} γ_E^{(1)}`.
pub fn eval_p(lambda: f64, g_e0: f64, g_e1: f64, g_r1: f64) -> f64 {
    lambda * lambda - lambda * (g_e0 - g_e1) - g_r1 - g_e0 * g_e1
}

/// Roots `λ− < 0 < λ+` of `p`:
/// `λ± = ½(γ_E^{(0)} − γ_E^{(1)}) ± √(¼(γ_E^{(0)} + γ_E^{(1)})² + γ_R^{(1)})`.
pub fn lambda_pm(g_e0: f64, g_e1: f64, g_r1: f64) -> (f64, f64) {
    debug_assert!(g_r1 > 0.0, "lambda_pm requires positive gamma_R1");
    let mid = 0.5 * (g_e0 - g_e1);
    let rad = (0.25 * (g_e0 + g_e1) * (g_e0 + g_e1) + g_r1).sqrt();
    (mid - rad, mid + rad)
}

/// The cubic `π(λ) = (γ_E^{(0)} − λ) γ_R^{(2)} + p(λ)(λ − γ_E^{(2)})`.
pub fn eval_pi(lambda: f64, g_e0: f64, g_e1: f64, g_e2: f64, g_r1: f64, g_r2: f64) -> f64 {
    (g_e0 - lambda) * g_r2 + eval_p(lambda, g_e0, g_e1, g_r1) * (lambda - g_e2)
}

/// Saddle-point inclusion intervals (two-block analysis): the negative
/// interval from the monotone endpoint evaluations of `λ−` and the positive
/// interval `[α_E^{(0)}, λ+(β_E^{(0)}, α_E^{(1)}, β_R^{(1)})]`.
pub fn saddle_intervals(ind: &IndicatorSet) -> BoundsInterval {
    let neg_lo = lambda_pm(ind.a_e0, ind.b_e1, ind.b_r1).0;
    let neg_hi = lambda_pm(ind.b_e0, ind.a_e1, ind.a_r1).0;
    let pos_lo = ind.a_e0;
    let pos_hi = lambda_pm(ind.b_e0, ind.a_e1, ind.b_r1).1;
    BoundsInterval::new(neg_lo, neg_hi, pos_lo, pos_hi)
}

fn newton_polish(
    mut x: f64,
    lo: f64,
    hi: f64,
    f: &impl Fn(f64) -> f64,
    df: &impl Fn(f64) -> f64,
) -> f64 {
    for _ in 0..6 {
        let d = df(x);
        if d == 0.0 {
            break;
        }
        let next = x - f(x) / d;
        if next.is_finite() && next >= lo && next <= hi {
            x = next;
        } else {
            break;
        }
    }
    x
}

fn bisect(mut lo: f64, mut hi: f64, f: &impl Fn(f64) -> f64) -> f64 {
    // keeps the invariant f(lo) ≥ 0 ≥ f(hi) or the reverse
    let positive_at_lo = f(lo) >= 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) >= 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The three real roots `μ_a < λ− < 0 < μ_b < λ+ < μ_c` of the cubic `π`.
/// Arguments are ordered `(γ_E^{(0)}, γ_E^{(1)}, γ_E^{(2)}, γ_R^{(1)}, γ_R^{(2)})`.
/// Bracketing uses the sign facts `π(λ−) > 0`, `π(0) > 0`, `π(λ+) < 0`.
pub fn pi_roots(
    g_e0: f64,
    g_e1: f64,
    g_e2: f64,
    g_r1: f64,
    g_r2: f64,
) -> Result<(f64, f64, f64), DspError> {
    assert!(g_r1 > 0.0, "pi_roots requires positive gamma_R1");
    let (lambda_minus, lambda_plus) = lambda_pm(g_e0, g_e1, g_r1);
    if g_r2 <= DEFAULT.degenerate_cubic {
        return Err(DspError::DegenerateCubic { limit: (lambda_minus, g_e2, lambda_plus) });
    }
    let f = |x: f64| eval_pi(x, g_e0, g_e1, g_e2, g_r1, g_r2);
    let df = |x: f64| {
        -g_r2 + (2.0 * x - (g_e0 - g_e1)) * (x - g_e2) + eval_p(x, g_e0, g_e1, g_r1)
    };

    // μ_a below λ−: expand the bracket outward until the sign flips
    let mut width = (lambda_plus - lambda_minus).max(1.0);
    let mut lo = lambda_minus - width;
    while f(lo) >= 0.0 {
        width *= 2.0;
        lo = lambda_minus - width;
        assert!(width.is_finite(), "cubic bracket expansion diverged");
    }
    let mu_a = bisect(lambda_minus, lo, &f);
    let mu_a = newton_polish(mu_a, lo, lambda_minus, &f, &df);

    // μ_b between 0 and λ+
    let mu_b = bisect(0.0, lambda_plus, &f);
    let mu_b = newton_polish(mu_b, 0.0, lambda_plus, &f, &df);

    // μ_c above λ+
    let mut width = (lambda_plus - lambda_minus).max(1.0);
    let mut hi = lambda_plus + width;
    while f(hi) <= 0.0 {
        width *= 2.0;
        hi = lambda_plus + width;
        assert!(width.is_finite(), "cubic bracket expansion diverged");
    }
    let mu_c = bisect(hi, lambda_plus, &f);
    let mu_c = newton_polish(mu_c, lambda_plus, hi, &f, &df);

    Ok((mu_a, mu_b, mu_c))
}

/// The final inclusion bounds: the negative interval
/// `[μ_a(α_E^{(0)}, β_E^{(1)}, β_R^{(1)}, α_E^{(2)}, β_R^{(2)}), λ−(β_E^{(0)}, α_E^{(1)}, α_R^{(1)})]`
/// and the positive interval
/// `[min{α_E^{(0)}, μ_b(α_E^{(0)}, β_E^{(1)}, β_R^{(1)}, α_E^{(2)}, α_R^{(2)})}, μ_c(β_E^{(0)}, α_E^{(1)}, β_R^{(1)}, β_E^{(2)}, β_R^{(2)})]`,
/// together with the coarser comparison endpoints obtained by zeroing the
/// middle-block indicator.
pub fn dsp_bounds(ind: &IndicatorSet) -> Result<DspBounds, DspError> {
    ind.validate()?;
    let (mu_a, _, _) = pi_roots(ind.a_e0, ind.b_e1, ind.a_e2, ind.b_r1, ind.b_r2)?;
    let neg_lo = mu_a;
    let neg_hi = lambda_pm(ind.b_e0, ind.a_e1, ind.a_r1).0;
    let (_, mu_b, _) = pi_roots(ind.a_e0, ind.b_e1, ind.a_e2, ind.b_r1, ind.a_r2)?;
    let pos_lo = ind.a_e0.min(mu_b);
    let (_, _, mu_c) = pi_roots(ind.b_e0, ind.a_e1, ind.b_e2, ind.b_r1, ind.b_r2)?;
    let pos_hi = mu_c;

    let bradley_neg_hi =
        0.5 * (ind.b_e0 - (ind.b_e0 * ind.b_e0 + 4.0 * ind.a_r1).sqrt());
    let (_, bradley_pos_lo, _) = pi_roots(ind.a_e0, ind.b_e1, 0.0, ind.b_r1, ind.a_r2)?;

    Ok(DspBounds { neg_lo, neg_hi, pos_lo, pos_hi, bradley_neg_hi, bradley_pos_lo })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{gen_eig_all, sym_eigvalues, Mat};
    use crate::poly::{interval_i, zeros_p};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn lambda_pm_closed_forms() {
        let (lm, lp) = lambda_pm(1.0, 0.0, 1.0);
        assert!((lm + 0.618034).abs() < 1e-6);
        assert!((lp - 1.618034).abs() < 1e-6);
        let (lm, lp) = lambda_pm(1.0, 1.0, 1.0);
        assert!((lm + 2.0_f64.sqrt()).abs() < 1e-12);
        assert!((lp - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn lambda_pm_are_roots_of_p() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        for _ in 0..200 {
            let g_e0 = rng.gen_range(0.01..3.0);
            let g_e1 = rng.gen_range(0.0..2.0);
            let g_r1 = rng.gen_range(0.01..4.0);
            let (lm, lp) = lambda_pm(g_e0, g_e1, g_r1);
            assert!(lm < 0.0 && lp > 0.0);
            let scale = (g_r1 + g_e0 * g_e1).max(1.0);
            assert!(eval_p(lm, g_e0, g_e1, g_r1).abs() <= 1e-12 * scale);
            assert!(eval_p(lp, g_e0, g_e1, g_r1).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn saddle_interval_degenerate_indicators() {
        let ind = IndicatorSet {
            a_e0: 1.0,
            b_e0: 1.0,
            a_e1: 0.0,
            b_e1: 0.0,
            a_e2: 0.0,
            b_e2: 0.0,
            a_r1: 1.0,
            b_r1: 1.0,
            a_r2: 1.0,
            b_r2: 1.0,
        };
        let b = saddle_intervals(&ind);
        assert!((b.neg_lo + 0.618034).abs() < 1e-6);
        assert!((b.neg_hi + 0.618034).abs() < 1e-6);
        assert!((b.pos_lo - 1.0).abs() < 1e-12);
        assert!((b.pos_hi - 1.618034).abs() < 1e-6);
    }

    #[test]
    fn saddle_interval_all_ones() {
        let ind = IndicatorSet {
            a_e0: 1.0,
            b_e0: 1.0,
            a_e1: 1.0,
            b_e1: 1.0,
            a_e2: 0.0,
            b_e2: 0.0,
            a_r1: 1.0,
            b_r1: 1.0,
            a_r2: 1.0,
            b_r2: 1.0,
        };
        let b = saddle_intervals(&ind);
        let s2 = 2.0_f64.sqrt();
        assert!((b.neg_lo + s2).abs() < 1e-12 && (b.neg_hi + s2).abs() < 1e-12);
        assert!((b.pos_lo - 1.0).abs() < 1e-12 && (b.pos_hi - s2).abs() < 1e-12);
    }

    #[test]
    fn two_block_containment_random() {
        // eigenvalues of the preconditioned two-block system lie in the
        // saddle intervals built from its computed indicators
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        for _ in 0..30 {
            let (n0, n1) = (rng.gen_range(5..9), rng.gen_range(3..6));
            let b0 = Mat::from_fn(n0, n0, |_, _| rng.gen_range(-1.0..1.0));
            let mut a0 = SymMatrix::gram(&b0);
            a0.add_scaled_identity(0.5 * n0 as f64);
            let g = Mat::from_fn(n1, n1, |_, _| rng.gen_range(-1.0..1.0));
            let a1 = SymMatrix::gram(&g);
            let b1 = Mat::from_fn(n1, n0, |_, _| rng.gen_range(-1.0..1.0));
            let sys =
                BlockTridiagonalSystem::new(vec![a0.clone(), a1.clone()], vec![b1.clone()]).unwrap();
            // inexact chain: scaled exact complements
            let exact = SchurChain::exact(&sys).unwrap();
            let s0 = exact.block(0).scaled(rng.gen_range(0.8..1.3));
            let s1 = exact.block(1).scaled(rng.gen_range(0.8..1.3));
            let chain = SchurChain::from_blocks(vec![s0.clone(), s1.clone()]).unwrap();

            let (a_e0, b_e0) = gen_eig_extremes(&a0, &s0).unwrap();
            let (a_e1, b_e1) = gen_eig_extremes(&a1, &s1).unwrap();
            let x = chain.factor(0).forward_mat(&b1.transpose());
            let (a_r1, b_r1) = gen_eig_extremes(&SymMatrix::gram(&x), &s1).unwrap();
            let ind = IndicatorSet {
                a_e0,
                b_e0,
                a_e1,
                b_e1,
                a_e2: 0.0,
                b_e2: 0.0,
                a_r1,
                b_r1,
                a_r2: 1.0,
                b_r2: 1.0,
            };
            let bounds = saddle_intervals(&ind);
            let eigs = gen_eig_all(&sys.assemble_dense(), &chain.precond_dense()).unwrap();
            let radius = eigs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            for &lam in &eigs {
                assert!(
                    bounds.contains(lam, 1e-9 * radius.max(1.0)),
                    "{lam} outside {bounds:?}"
                );
            }
        }
    }

    #[test]
    fn cubic_trace_identity() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..200 {
            let g_e0 = rng.gen_range(0.05..2.5);
            let g_e1 = rng.gen_range(0.0..1.5);
            let g_e2 = rng.gen_range(0.0..2.5);
            let g_r1 = rng.gen_range(0.05..3.0);
            let g_r2 = rng.gen_range(0.05..3.0);
            let (a, b, c) = pi_roots(g_e0, g_e1, g_e2, g_r1, g_r2).unwrap();
            let sum = a + b + c;
            let expect = g_e0 - g_e1 + g_e2;
            assert!((sum - expect).abs() <= 1e-10 * expect.abs().max(1.0), "{sum} vs {expect}");
        }
    }

    #[test]
    fn cubic_known_roots() {
        // γ_E0 = 1, γ_E1 = γ_E2 = 0, γ_R1 = γ_R2 = 1:
        // π(λ) = λ³ − λ² − 2λ + 1, the degree-3 recurrence polynomial
        let (a, b, c) = pi_roots(1.0, 0.0, 0.0, 1.0, 1.0).unwrap();
        let p3 = zeros_p(3);
        assert!((c - p3[0]).abs() < 1e-10);
        assert!((b - p3[1]).abs() < 1e-10);
        assert!((a - p3[2]).abs() < 1e-10);
    }

    #[test]
    fn cubic_roots_ordering_and_residual() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..300 {
            let g_e0 = rng.gen_range(0.01..3.0);
            let g_e1 = rng.gen_range(0.0..2.0);
            let g_e2 = rng.gen_range(0.0..4.0);
            let g_r1 = rng.gen_range(0.01..5.0);
            let g_r2 = rng.gen_range(0.01..5.0);
            let (mu_a, mu_b, mu_c) = pi_roots(g_e0, g_e1, g_e2, g_r1, g_r2).unwrap();
            let (lm, lp) = lambda_pm(g_e0, g_e1, g_r1);
            assert!(mu_a < lm && lm < 0.0 && 0.0 < mu_b && mu_b < lp && lp < mu_c);
            // |π(μ)| ≤ 1e-12 · max(1, |coefficients|)
            let c2 = -(g_e0 - g_e1 + g_e2);
            let c1 = g_e2 * (g_e0 - g_e1) - g_r1 - g_e0 * g_e1 - g_r2;
            let c0 = g_e2 * (g_r1 + g_e0 * g_e1) + g_e0 * g_r2;
            let coeff_scale = 1.0_f64.max(c2.abs()).max(c1.abs()).max(c0.abs());
            for mu in [mu_a, mu_b, mu_c] {
                let res = eval_pi(mu, g_e0, g_e1, g_e2, g_r1, g_r2).abs();
                let local = coeff_scale * mu.abs().max(1.0).powi(2);
                assert!(res <= 1e-12 * local.max(coeff_scale), "residual {res:e}");
            }
        }
    }

    #[test]
    fn cubic_degenerate_limit() {
        let (lm, lp) = lambda_pm(0.8, 0.1, 1.3);
        match pi_roots(0.8, 0.1, 0.4, 1.3, 0.0) {
            Err(DspError::DegenerateCubic { limit }) => {
                assert!((limit.0 - lm).abs() < 1e-14);
                assert!((limit.1 - 0.4).abs() < 1e-14);
                assert!((limit.2 - lp).abs() < 1e-14);
            }
            other => panic!("expected degenerate cubic, got {other:?}"),
        }
        // continuity: tiny γ_R2 approaches the limit triple
        let (a, b, c) = pi_roots(0.8, 0.1, 0.4, 1.3, 1e-10).unwrap();
        assert!((a - lm).abs() < 1e-6);
        assert!((b - 0.4).abs() < 1e-6);
        assert!((c - lp).abs() < 1e-6);
    }

    #[test]
    fn bounds_comparison_instance() {
        // α_E0 = 0.01, β_E1 = 0.1, β_R1 = 2, α_E2 = 0.1, α_R2 = 1e-3:
        // the refined lower positive bound is α_E0 itself, while the coarser
        // comparison value is three orders of magnitude smaller
        let ind = IndicatorSet {
            a_e0: 0.01,
            b_e0: 1.0,
            a_e1: 0.0,
            b_e1: 0.1,
            a_e2: 0.1,
            b_e2: 0.5,
            a_r1: 0.5,
            b_r1: 2.0,
            a_r2: 1e-3,
            b_r2: 0.5,
        };
        let bounds = dsp_bounds(&ind).unwrap();
        assert!((bounds.pos_lo - 0.01).abs() <= 1e-14, "pos_lo = {}", bounds.pos_lo);
        let expect = 5e-6;
        assert!(
            (bounds.bradley_pos_lo - expect).abs() <= 0.2 * expect,
            "comparison value {} not within 20% of {expect}",
            bounds.bradley_pos_lo
        );
        // refinement inequalities
        assert!(bounds.neg_hi >= bounds.bradley_neg_hi - 1e-12);
        assert!(bounds.pos_lo >= bounds.bradley_pos_lo - 1e-12);
    }

    #[test]
    fn exact_point_indicators_reproduce_degree3_zeros() {
        // exact preconditioning with vanishing later blocks forces
        // R_i R_iᵀ = I; the bounds collapse onto the degree-3 zeros and sit
        // inside the general interval hull
        let ind = IndicatorSet {
            a_e0: 1.0,
            b_e0: 1.0,
            a_e1: 0.0,
            b_e1: 0.0,
            a_e2: 0.0,
            b_e2: 0.0,
            a_r1: 1.0,
            b_r1: 1.0,
            a_r2: 1.0,
            b_r2: 1.0,
        };
        let bounds = dsp_bounds(&ind).unwrap();
        let p3 = zeros_p(3);
        assert!((bounds.neg_lo - p3[2]).abs() < 1e-10);
        assert!((bounds.neg_hi + 0.618034).abs() < 1e-6);
        assert!((bounds.pos_lo - p3[1]).abs() < 1e-10);
        assert!((bounds.pos_hi - p3[0]).abs() < 1e-10);
        let hull = interval_i(3);
        for v in [bounds.neg_lo, bounds.neg_hi] {
            assert!(v >= hull.neg_lo - 1e-9 && v <= hull.neg_hi + 1e-9);
        }
        for v in [bounds.pos_lo, bounds.pos_hi] {
            assert!(v >= hull.pos_lo - 1e-9 && v <= hull.pos_hi + 1e-9);
        }
    }

    #[test]
    fn computed_indicators_match_prescription_on_diagonal_instance() {
        // diagonal blocks with prescribed spectra: indicators must equal the
        // prescribed extremes exactly
        let a0 = SymMatrix::from_diag(&[1.0, 2.0, 4.0]);
        let s0 = SymMatrix::from_diag(&[2.0, 2.0, 2.0]);
        let a1 = SymMatrix::zeros(2);
        let b1 = Mat::from_rows(2, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0]);
        let s1 = SymMatrix::from_diag(&[0.5, 0.5]);
        let a2 = SymMatrix::from_diag(&[0.3]);
        let b2 = Mat::from_rows(1, 2, &[1.0, 0.0]);
        let s2 = SymMatrix::from_diag(&[4.0]);
        let sys = BlockTridiagonalSystem::new(vec![a0, a1, a2], vec![b1, b2]).unwrap();
        let chain = SchurChain::from_blocks(vec![s0, s1, s2]).unwrap();
        let ind = compute_indicators(&sys, &chain).unwrap();
        assert!((ind.a_e0 - 0.5).abs() < 1e-12 && (ind.b_e0 - 2.0).abs() < 1e-12);
        assert!(ind.a_e1 == 0.0 && ind.b_e1 == 0.0);
        assert!((ind.a_e2 - 0.075).abs() < 1e-12 && (ind.b_e2 - 0.075).abs() < 1e-12);
        // R_1 R_1ᵀ = B_1 S_0^{-1} B_1ᵀ / s_1 = (1/2) / (1/2) = 1
        assert!((ind.a_r1 - 1.0).abs() < 1e-12 && (ind.b_r1 - 1.0).abs() < 1e-12);
        // R_2 R_2ᵀ = (1/0.5) / 4 = 0.5
        assert!((ind.a_r2 - 0.5).abs() < 1e-12 && (ind.b_r2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn exact_chain_with_zero_tail_blocks_has_unit_r_range() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let n = [8usize, 6, 4];
        let g = Mat::from_fn(n[0], n[0], |_, _| rng.gen_range(-1.0..1.0));
        let mut a0 = SymMatrix::gram(&g);
        a0.add_scaled_identity(4.0);
        let diag = vec![a0, SymMatrix::zeros(n[1]), SymMatrix::zeros(n[2])];
        let off: Vec<Mat> = n
            .windows(2)
            .map(|w| Mat::from_fn(w[1], w[0], |_, _| rng.gen_range(-1.0..1.0)))
            .collect();
        let sys = BlockTridiagonalSystem::new(diag, off).unwrap();
        let chain = SchurChain::exact(&sys).unwrap();
        let ind = compute_indicators(&sys, &chain).unwrap();
        assert!(ind.b_r1 <= 1.0 + 1e-10 && ind.a_r1 >= 1.0 - 1e-10);
        assert!(ind.b_r2 <= 1.0 + 1e-10 && ind.a_r2 >= 1.0 - 1e-10);
    }

    #[test]
    fn wrong_block_count_is_rejected() {
        let sys = BlockTridiagonalSystem::new(
            vec![SymMatrix::identity(2), SymMatrix::zeros(1)],
            vec![Mat::from_rows(1, 2, &[1.0, 0.0])],
        )
        .unwrap();
        let chain = SchurChain::exact(&sys).unwrap();
        assert!(matches!(
            compute_indicators(&sys, &chain),
            Err(DspError::WrongBlockCount { got: 2 })
        ));
    }

    #[test]
    fn containment_on_random_three_block_instances() {
        let mut rng = ChaCha12Rng::seed_from_u64(17);
        for _ in 0..20 {
            let sizes = [rng.gen_range(7..10usize), rng.gen_range(5..7), rng.gen_range(3..5)];
            let g = Mat::from_fn(sizes[0], sizes[0], |_, _| rng.gen_range(-1.0..1.0));
            let mut a0 = SymMatrix::gram(&g);
            a0.add_scaled_identity(2.0);
            let diag = vec![a0, SymMatrix::zeros(sizes[1]), SymMatrix::zeros(sizes[2])];
            let off: Vec<Mat> = sizes
                .windows(2)
                .map(|w| Mat::from_fn(w[1], w[0], |_, _| rng.gen_range(-1.0..1.0)))
                .collect();
            let sys = BlockTridiagonalSystem::new(diag, off).unwrap();
            let exact = SchurChain::exact(&sys).unwrap();
            let blocks: Vec<SymMatrix> = (0..3)
                .map(|k| {
                    let mut s = exact.block(k).scaled(rng.gen_range(0.7..1.4));
                    s.add_scaled_identity(rng.gen_range(0.0..0.2));
                    s
                })
                .collect();
            let chain = SchurChain::from_blocks(blocks).unwrap();
            let ind = compute_indicators(&sys, &chain).unwrap();
            let bounds = dsp_bounds(&ind).unwrap();
            let eigs = gen_eig_all(&sys.assemble_dense(), &chain.precond_dense()).unwrap();
            let radius = eigs.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            for &lam in &eigs {
                assert!(
                    bounds.contains(lam, 1e-8 * radius.max(1.0)),
                    "{lam} outside {bounds:?}"
                );
            }
            // sanity: eigenvalues really are what the indicators describe
            let _ = sym_eigvalues(&sys.assemble_dense()).unwrap();
        }
    }
}
