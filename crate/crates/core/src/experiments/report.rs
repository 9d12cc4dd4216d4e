//! Experiment report records and the deterministic random-number streams
//! behind every randomized driver.

use crate::dsp::DspBounds;
use crate::perturb::MinkowskiBounds;
use crate::poly::BoundsInterval;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

/// Counter-based RNG stream: identical `(seed, stream_index)` pairs
/// reproduce identical draws regardless of execution order or thread count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        RngStream { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// The theoretical bounds attached to a report.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TheoreticalBounds {
    /// Interval hull for exact preconditioning.
    Interval(BoundsInterval),
    /// Refined double saddle-point bounds.
    Dsp(DspBounds),
    /// Minkowski-shifted hull for inexact preconditioning.
    Minkowski(MinkowskiBounds),
}

impl TheoreticalBounds {
    /// Whether `x` lies in the union described by the bounds, with `slack`.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        match self {
            TheoreticalBounds::Interval(b) => b.contains(x, slack),
            TheoreticalBounds::Dsp(b) => b.contains(x, slack),
            TheoreticalBounds::Minkowski(b) => b.contains(x, slack),
        }
    }

    /// The four bound endpoints in report order.
    pub fn endpoints(&self) -> [f64; 4] {
        match self {
            TheoreticalBounds::Interval(b) => [b.neg_lo, b.neg_hi, b.pos_lo, b.pos_hi],
            TheoreticalBounds::Dsp(b) => [b.neg_lo, b.neg_hi, b.pos_lo, b.pos_hi],
            TheoreticalBounds::Minkowski(b) => {
                let s = b.shifted_interval;
                [s.neg_lo, s.neg_hi, s.pos_lo, s.pos_hi]
            }
        }
    }
}

/// One experiment outcome: bounds, computed extremal eigenvalues
/// `(neg_lo, neg_hi, pos_lo, pos_hi)`, iteration count, and any containment
/// violations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub label: String,
    pub seed: u64,
    pub system_dims: Vec<usize>,
    pub theoretical_bounds: TheoreticalBounds,
    pub computed_extremes: [f64; 4],
    pub minres_iterations: usize,
    pub timing_seconds: f64,
    pub violations: Vec<String>,
}

/// Cluster extremes `(neg_lo, neg_hi, pos_lo, pos_hi)` of a set of real
/// eigenvalues split at zero. Panics when a side is empty; saddle-point
/// spectra always populate both.
pub fn cluster_extremes(eigs: &[f64]) -> [f64; 4] {
    let mut neg_lo = f64::INFINITY;
    let mut neg_hi = f64::NEG_INFINITY;
    let mut pos_lo = f64::INFINITY;
    let mut pos_hi = f64::NEG_INFINITY;
    for &v in eigs {
        if v < 0.0 {
            neg_lo = neg_lo.min(v);
            neg_hi = neg_hi.max(v);
        } else if v > 0.0 {
            pos_lo = pos_lo.min(v);
            pos_hi = pos_hi.max(v);
        }
    }
    assert!(
        neg_lo.is_finite() && pos_hi.is_finite(),
        "spectrum does not populate both signs"
    );
    [neg_lo, neg_hi, pos_lo, pos_hi]
}

/// Containment violations of `eigs` against `bounds` with relative slack
/// `containment_rel · max |λ|`.
pub fn collect_violations(eigs: &[f64], bounds: &TheoreticalBounds) -> Vec<String> {
    let radius = eigs.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let slack = crate::tol::DEFAULT.containment_rel * radius;
    eigs.iter()
        .filter(|v| !bounds.contains(**v, slack))
        .map(|v| format!("eigenvalue {v} outside {:?}", bounds.endpoints()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn rng_streams_are_reproducible_and_independent() {
        let a1: Vec<u64> = {
            let mut r = RngStream::new(42, 7).rng();
            (0..8).map(|_| r.next_u64()).collect()
        };
        let a2: Vec<u64> = {
            let mut r = RngStream::new(42, 7).rng();
            (0..8).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a1, a2, "same (seed, stream) must reproduce bit-for-bit");
        let b: Vec<u64> = {
            let mut r = RngStream::new(42, 8).rng();
            (0..8).map(|_| r.next_u64()).collect()
        };
        assert_ne!(a1, b, "different streams must diverge");
    }

    #[test]
    fn cluster_extremes_and_violations() {
        let eigs = [-1.5, -0.7, 0.5, 1.9];
        let ex = cluster_extremes(&eigs);
        assert_eq!(ex, [-1.5, -0.7, 0.5, 1.9]);
        let bounds =
            TheoreticalBounds::Interval(BoundsInterval::new(-1.6, -0.6, 0.4, 2.0));
        assert!(collect_violations(&eigs, &bounds).is_empty());
        let tight = TheoreticalBounds::Interval(BoundsInterval::new(-1.6, -0.6, 0.6, 2.0));
        assert_eq!(collect_violations(&eigs, &tight).len(), 1);
    }
}
