use msp_core::linalg::{tridiag_eig, Mat, SymMatrix};
use std::time::Instant;
fn main() {
    let n = 3267usize;
    let b = Mat::from_fn(n, n, |i, j| (((i * 37 + j * 17) % 101) as f64) / 101.0 - 0.5);
    let m = SymMatrix::symmetric_part(&b);
    let t0 = Instant::now();
    let vals = msp_core::linalg::sym_eigvalues(&m).unwrap();
    println!("total {:.2}s, min {:.3}", t0.elapsed().as_secs_f64(), vals[0]);
    // time tql alone on a same-size tridiagonal
    let d = vec![0.5; n];
    let e = vec![0.3; n - 1];
    let t1 = Instant::now();
    let v2 = tridiag_eig(&d, &e).unwrap();
    println!("tql alone {:.2}s, min {:.3}", t1.elapsed().as_secs_f64(), v2[0]);
}
