use msp_core::linalg::{sym_eigvalues, Mat, SymMatrix};
use std::time::Instant;
fn main() {
    for n in [900usize, 2000, 3267] {
        let b = Mat::from_fn(n, n, |i, j| (((i * 37 + j * 17) % 101) as f64) / 101.0 - 0.5);
        let m = SymMatrix::symmetric_part(&b);
        let t0 = Instant::now();
        let v = sym_eigvalues(&m).unwrap();
        println!("n = {n}: {:.2}s  (lambda_min = {:.4}, lambda_max = {:.4})", t0.elapsed().as_secs_f64(), v[0], v[n-1]);
    }
}
