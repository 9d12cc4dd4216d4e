//! The parametric polynomial family `U_k(x, γ)` localizing the eigenvalues of
//! block-diagonally preconditioned multiple saddle-point matrices: three-term
//! recurrence evaluation, closed-form zeros of the `γ = 1` and leading-zero
//! specializations, zeros for arbitrary parameters through an equivalent
//! symmetric tridiagonal eigenproblem, and the interval hull containing every
//! zero over the admissible parameter box.

use crate::linalg::{tridiag_eig, LinalgError};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Errors from the polynomial-bound routines.
#[derive(Clone, Debug, PartialEq)]
pub enum PolyError {
    /// A parameter fell outside `[0, 1]`.
    InvalidGamma { index: usize, value: f64 },
    /// A non-positive parameter was passed where the strict-interior routine
    /// is required; route through the binary/segment path instead.
    DegenerateGamma { index: usize, value: f64 },
    /// A binary-only routine received a parameter other than 0 or 1.
    NotBinary { index: usize, value: f64 },
    Linalg(LinalgError),
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::InvalidGamma { index, value } => {
                write!(f, "gamma[{index}] = {value} outside [0, 1]")
            }
            PolyError::DegenerateGamma { index, value } => {
                write!(f, "gamma[{index}] = {value} is not strictly positive")
            }
            PolyError::NotBinary { index, value } => {
                write!(f, "gamma[{index}] = {value} is not 0 or 1")
            }
            PolyError::Linalg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PolyError {}

impl From<LinalgError> for PolyError {
    fn from(e: LinalgError) -> Self {
        PolyError::Linalg(e)
    }
}

/// Parameter vector `γ = [γ_1, …, γ_k]` with each entry in `[0, 1]`
/// (0 admitted as the closure of the Rayleigh-quotient range).
#[derive(Clone, Debug, PartialEq)]
pub struct GammaVector(Vec<f64>);

impl GammaVector {
    pub fn new(values: Vec<f64>) -> Result<Self, PolyError> {
        for (index, &value) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&value) || value.is_nan() {
                return Err(PolyError::InvalidGamma { index, value });
            }
        }
        Ok(GammaVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One negative and one positive interval of eigenvalue bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsInterval {
    pub neg_lo: f64,
    pub neg_hi: f64,
    pub pos_lo: f64,
    pub pos_hi: f64,
}

impl BoundsInterval {
    pub fn new(neg_lo: f64, neg_hi: f64, pos_lo: f64, pos_hi: f64) -> Self {
        assert!(
            neg_lo <= neg_hi && neg_hi < 0.0 && 0.0 < pos_lo && pos_lo <= pos_hi,
            "invalid bounds interval ({neg_lo}, {neg_hi}, {pos_lo}, {pos_hi})"
        );
        BoundsInterval { neg_lo, neg_hi, pos_lo, pos_hi }
    }

    /// Whether `x` lies in the union of the two intervals, with `slack`.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        (x >= self.neg_lo - slack && x <= self.neg_hi + slack)
            || (x >= self.pos_lo - slack && x <= self.pos_hi + slack)
    }
}

/// Evaluate `U_{k+1}(x, γ)` for `γ = [γ_1, …, γ_k]` by the three-term
/// recurrence with seeds `U_0 = 1`, `U_1 = x − 1`.
pub fn eval_u(x: f64, gamma: &[f64]) -> f64 {
    let mut prev = 1.0; // U_0
    let mut cur = x - 1.0; // U_1
    for (k, &g) in gamma.iter().enumerate() {
        // step k (0-based) builds U_{k+2} with sign (−1)^{k+2} = (−1)^k
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let next = (sign * (1.0 - g) + x) * cur - g * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Zeros of `P_k`, descending: `2cos((2j−1)π/(2k+1))`, `j = 1, …, k`.
pub fn zeros_p(k: usize) -> Vec<f64> {
    assert!(k >= 1, "zeros_p requires k >= 1");
    (1..=k).map(|j| 2.0 * ((2 * j - 1) as f64 * PI / (2 * k + 1) as f64).cos()).collect()
}

/// Zeros of `V_k`, descending: `{1} ∪ {−p : p zero of P_{k−1}}`.
pub fn zeros_v(k: usize) -> Vec<f64> {
    assert!(k >= 2, "zeros_v requires k >= 2");
    let mut out = vec![1.0];
    out.extend(zeros_p(k - 1).into_iter().map(|p| -p));
    out.sort_by(|a, b| b.partial_cmp(a).unwrap());
    out
}

/// Zeros of `U_{k+1}(x, γ)` for binary `γ ∈ {0, 1}^k`, ascending (with
/// multiplicity). Zero entries split the problem into decoupled segments,
/// each contributing sign-flipped Chebyshev-like zeros.
pub fn zeros_u_binary(gamma: &[f64]) -> Result<Vec<f64>, PolyError> {
    for (index, &value) in gamma.iter().enumerate() {
        if value != 0.0 && value != 1.0 {
            return Err(PolyError::NotBinary { index, value });
        }
    }
    let k = gamma.len();
    // one-based positions of vanishing parameters, bracketed by 0 and k+1
    let mut cuts = vec![0usize];
    cuts.extend(gamma.iter().enumerate().filter(|(_, &g)| g == 0.0).map(|(i, _)| i + 1));
    cuts.push(k + 1);

    let mut zeros = Vec::with_capacity(k + 1);
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let seg_len = hi - lo;
        let sign = if lo % 2 == 0 { 1.0 } else { -1.0 };
        for s in 1..=seg_len {
            zeros.push(sign * 2.0 * ((2 * s - 1) as f64 * PI / (2 * seg_len + 1) as f64).cos());
        }
    }
    zeros.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(zeros)
}

/// Zeros of `U_{k+1}(x, γ)` for strictly positive `γ ∈ (0, 1]^k`, ascending.
/// They are computed as the negated eigenvalues of the equivalent symmetric
/// tridiagonal matrix and come out real and distinct.
pub fn zeros_u_general(gamma: &GammaVector) -> Result<Vec<f64>, PolyError> {
    for (index, &value) in gamma.values().iter().enumerate() {
        if value <= 0.0 {
            return Err(PolyError::DegenerateGamma { index, value });
        }
    }
    let k = gamma.len();
    // M_{k+1}: diag c_1 = −1, c_j = (−1)^j (1 − γ_{j−1}); offdiag b_j = √γ_{j−1}
    let mut diag = Vec::with_capacity(k + 1);
    diag.push(-1.0);
    for j in 2..=k + 1 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        diag.push(sign * (1.0 - gamma.values()[j - 2]));
    }
    let offdiag: Vec<f64> = gamma.values().iter().map(|g| g.sqrt()).collect();
    let mut eigs = tridiag_eig(&diag, &offdiag)?;
    // zeros of U are the eigenvalues of −M
    for v in &mut eigs {
        *v = -*v;
    }
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(eigs)
}

/// Characteristic-polynomial evaluation `χ_{k+1}(−x)` of the tridiagonal
/// matrix used by [`zeros_u_general`]; an independent determinant-recurrence
/// oracle for [`eval_u`].
pub fn char_poly_oracle(x: f64, gamma: &[f64]) -> f64 {
    let lambda = -x;
    let mut chi_prev = 1.0; // χ_0
    let mut chi = -1.0 - lambda; // χ_1, c_1 = −1
    for j in 2..=gamma.len() + 1 {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let c = sign * (1.0 - gamma[j - 2]);
        let b2 = gamma[j - 2];
        let next = (c - lambda) * chi - b2 * chi_prev;
        chi_prev = chi;
        chi = next;
    }
    chi
}

/// The interval hull `I_m` containing every zero of `U_m(x, γ)` over
/// `γ ∈ [0, 1]^{m−1}`: the union over `j ≤ m` of the zeros of `P_j` and the
/// negated zeros of `P_{j−1}`, collapsed to one negative and one positive
/// interval.
pub fn interval_i(m: usize) -> BoundsInterval {
    assert!(m >= 2, "interval_i requires m >= 2");
    let mut candidates: Vec<f64> = Vec::new();
    for j in 1..=m {
        candidates.extend(zeros_p(j));
        if j >= 2 {
            candidates.extend(zeros_p(j - 1).into_iter().map(|p| -p));
        }
    }
    let neg: Vec<f64> = candidates.iter().copied().filter(|&v| v < 0.0).collect();
    let pos: Vec<f64> = candidates.iter().copied().filter(|&v| v > 0.0).collect();
    let fold_min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
    let fold_max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    BoundsInterval::new(fold_min(&neg), fold_max(&neg), fold_min(&pos), fold_max(&pos))
}

/// Rows `(k, I_{k+1})` for `k = 1, …, max_k`.
pub fn bounds_table(max_k: usize) -> Vec<(usize, BoundsInterval)> {
    assert!(max_k >= 1, "bounds_table requires max_k >= 1");
    (1..=max_k).map(|k| (k, interval_i(k + 1))).collect()
}

/// CSV rendering of [`bounds_table`] with four-decimal endpoints. Column
/// order follows the interval-hull table convention: the lower interval's
/// endpoints first, then the upper interval's.
pub fn bounds_table_csv(max_k: usize) -> String {
    let mut out = String::from("k,bound_l_neg,bound_l_pos,bound_u_neg,bound_u_pos\n");
    for (k, b) in bounds_table(max_k) {
        out.push_str(&format!(
            "{k},{:.4},{:.4},{:.4},{:.4}\n",
            b.neg_lo, b.neg_hi, b.pos_lo, b.pos_hi
        ));
    }
    out
}
