//! Matrix-free linear operator contract.

use super::dense::SymMatrix;

/// The action `v ↦ M v` of a linear map, without committing to a storage
/// format. Self-adjointness, where required, is a caller contract.
pub trait LinearOperator {
    fn dim(&self) -> usize;
    fn apply(&self, v: &[f64]) -> Vec<f64>;
}

impl LinearOperator for SymMatrix {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.matvec(v)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        (**self).apply(v)
    }
}

/// Operator defined by a closure.
pub struct FnOperator<F: Fn(&[f64]) -> Vec<f64>> {
    n: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> Vec<f64>> FnOperator<F> {
    pub fn new(n: usize, f: F) -> Self {
        FnOperator { n, f }
    }
}

impl<F: Fn(&[f64]) -> Vec<f64>> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "operator dimension mismatch");
        let out = (self.f)(v);
        assert_eq!(out.len(), self.n, "operator output dimension mismatch");
        out
    }
}

/// Diagonal operator.
pub struct DiagOperator(pub Vec<f64>);

impl LinearOperator for DiagOperator {
    fn dim(&self) -> usize {
        self.0.len()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        self.0.iter().zip(v).map(|(d, x)| d * x).collect()
    }
}

/// `c · M` for an inner operator `M`.
pub struct ScaledOperator<T: LinearOperator> {
    pub scale: f64,
    pub inner: T,
}

impl<T: LinearOperator> LinearOperator for ScaledOperator<T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = self.inner.apply(v);
        for x in &mut out {
            *x *= self.scale;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn apply_is_statistically_linear() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        let m = SymMatrix::from_fn(15, |i, j| ((i * 31 + j * 7) % 11) as f64 / 11.0);
        for _ in 0..20 {
            let v: Vec<f64> = (0..15).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let w: Vec<f64> = (0..15).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let combo: Vec<f64> = v.iter().zip(&w).map(|(x, y)| a * x + b * y).collect();
            let lhs = m.apply(&combo);
            let mv = m.apply(&v);
            let mw = m.apply(&w);
            let scale = lhs.iter().fold(1.0_f64, |acc, x| acc.max(x.abs()));
            for i in 0..15 {
                assert!((lhs[i] - (a * mv[i] + b * mw[i])).abs() <= 1e-10 * scale);
            }
        }
    }
}
