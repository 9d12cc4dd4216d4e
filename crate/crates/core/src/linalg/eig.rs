//! Symmetric dense and tridiagonal eigensolvers.
//!
//! The dense path reduces to tridiagonal form by Householder reflections and
//! runs implicit-shift QL on the reduced problem, optionally accumulating the
//! orthogonal transform for eigenvectors (the classical tred2/tql2 pair, as
//! in EISPACK and its descendants).

use super::cholesky::cholesky;
use super::dense::{Mat, SymMatrix};
use super::LinalgError;
use crate::tol::DEFAULT;

/// Dense symmetric eigendecomposition: ascending eigenvalues and the matching
/// orthonormal eigenvectors as columns.
#[derive(Clone, Debug)]
pub struct SymEig {
    pub values: Vec<f64>,
    pub vectors: Mat,
}

/// Householder reduction of a full symmetric matrix (stored in `v`) to
/// tridiagonal form. With `accumulate` the orthogonal transform replaces `v`
/// and the diagonal lands in `d`; without it, the diagonal is left on the
/// diagonal of `v` and must be read off by the caller. The subdiagonal is
/// stored in `e[1..]`.
fn householder_tridiag(v: &mut Mat, d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let n = v.nrows();
    for j in 0..n {
        d[j] = v.get(n - 1, j);
    }

    for i in (1..n).rev() {
        // scale to avoid under/overflow
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v.get(i - 1, j);
                v.set(i, j, 0.0);
                v.set(j, i, 0.0);
            }
        } else {
            // generate the Householder vector
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }

            // apply the similarity transformation to remaining columns
            for j in 0..i {
                let f = d[j];
                v.set(j, i, f);
                let mut g = e[j] + v.get(j, j) * f;
                for k in j + 1..i {
                    g += v.get(k, j) * d[k];
                    e[k] += v.get(k, j) * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let fj = d[j];
                let gj = e[j];
                for k in j..i {
                    let upd = v.get(k, j) - (fj * e[k] + gj * d[k]);
                    v.set(k, j, upd);
                }
                d[j] = v.get(i - 1, j);
                v.set(i, j, 0.0);
            }
        }
        d[i] = h;
    }

    if accumulate {
        for i in 0..n - 1 {
            v.set(n - 1, i, v.get(i, i));
            v.set(i, i, 1.0);
            let h = d[i + 1];
            if h != 0.0 {
                for k in 0..=i {
                    d[k] = v.get(k, i + 1) / h;
                }
                for j in 0..=i {
                    let mut g = 0.0;
                    for k in 0..=i {
                        g += v.get(k, i + 1) * v.get(k, j);
                    }
                    for k in 0..=i {
                        let upd = v.get(k, j) - g * d[k];
                        v.set(k, j, upd);
                    }
                }
            }
            for k in 0..=i {
                v.set(k, i + 1, 0.0);
            }
        }
        for j in 0..n {
            d[j] = v.get(n - 1, j);
            v.set(n - 1, j, 0.0);
        }
        v.set(n - 1, n - 1, 1.0);
    } else {
        // diagonal of the reduced matrix stays on the diagonal of `v`
        for j in 0..n {
            d[j] = v.get(j, j);
        }
    }
    e[0] = 0.0;
}

/// Implicit-shift QL on a symmetric tridiagonal matrix stored as `d` (diagonal)
/// and `e[1..]` (subdiagonal). Accumulates rotations into the columns of `z`
/// when present. Eigenvalues come back in `d`, unsorted.
fn tql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Mat>) -> Result<(), LinalgError> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0_f64;
    let mut tst1 = 0.0_f64;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n {
            if e[m].abs() <= eps * tst1 {
                break;
            }
            m += 1;
        }
        if m == n {
            m = n - 1;
        }

        if m > l {
            let mut iter = 0;
            loop {
                iter += 1;
                if iter > 60 {
                    return Err(LinalgError::EigIterationLimit { index: l });
                }

                // implicit shift from the leading 2x2 block
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for dk in d.iter_mut().skip(l + 2) {
                    *dk -= h;
                }
                f += h;

                // implicit QL sweep from m down to l
                p = d[m];
                let mut c = 1.0_f64;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0_f64;
                let mut s2 = 0.0_f64;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);

                    if let Some(zz) = z.as_deref_mut() {
                        for k in 0..zz.nrows() {
                            let hk = zz.get(k, i + 1);
                            zz.set(k, i + 1, s * zz.get(k, i) + c * hk);
                            zz.set(k, i, c * zz.get(k, i) - s * hk);
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;

                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

fn sort_ascending(d: &mut [f64], z: Option<&mut Mat>) {
    let n = d.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    d.copy_from_slice(&sorted);
    if let Some(z) = z {
        let old = z.clone();
        for (new_col, &old_col) in order.iter().enumerate() {
            for k in 0..z.nrows() {
                z.set(k, new_col, old.get(k, old_col));
            }
        }
    }
}

fn check_cap(n: usize) -> Result<(), LinalgError> {
    let cap = DEFAULT.dense_eig_cap;
    if n > cap {
        return Err(LinalgError::DimensionCap { n, cap });
    }
    Ok(())
}

/// All eigenvalues of a symmetric matrix, ascending, plus orthonormal
/// eigenvectors (columns of `vectors`).
pub fn sym_eig(m: &SymMatrix) -> Result<SymEig, LinalgError> {
    check_cap(m.n())?;
    let n = m.n();
    let mut v = m.to_dense();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiag(&mut v, &mut d, &mut e, true);
    tql(&mut d, &mut e, Some(&mut v))?;
    sort_ascending(&mut d, Some(&mut v));
    Ok(SymEig { values: d, vectors: v })
}

/// Householder tridiagonalization on the packed lower triangle, eigenvalues
/// only. Works row-contiguously, which keeps large reductions memory-friendly.
fn tridiagonalize_packed(m: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.n();
    let idx = |i: usize, j: usize| i * (i + 1) / 2 + j;
    let mut a: Vec<f64> = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in 0..=i {
            a.push(m.get(i, j));
        }
    }
    let mut e = vec![0.0; n];
    let mut p = vec![0.0; n];

    for i in (1..n).rev() {
        let xs = idx(i, 0);
        let mut scale = 0.0;
        for k in 0..i {
            scale += a[xs + k].abs();
        }
        if scale == 0.0 {
            e[i] = 0.0;
            continue;
        }

        // Householder vector u overwrites row i in place
        let mut h = 0.0;
        for k in 0..i {
            a[xs + k] /= scale;
            h += a[xs + k] * a[xs + k];
        }
        let f = a[xs + i - 1];
        let g = if f > 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        a[xs + i - 1] = f - g;

        // p = A11 u / h over the leading i×i block, row-contiguous
        p[..i].fill(0.0);
        {
            let (rows, urow) = a.split_at(xs);
            let u = &urow[..i];
            for r in 0..i {
                let row = &rows[idx(r, 0)..idx(r, 0) + r + 1];
                let ur = u[r];
                let acc = crate::linalg::dense::vecops::dot(&row[..r], &u[..r]);
                crate::linalg::dense::vecops::axpy(ur, &row[..r], &mut p[..r]);
                p[r] += acc + row[r] * ur;
            }
        }
        let mut k_acc = 0.0;
        for c in 0..i {
            p[c] /= h;
            k_acc += p[c] * a[xs + c];
        }
        let kfac = k_acc / (2.0 * h);
        for c in 0..i {
            p[c] -= kfac * a[xs + c];
        }

        // A11 -= u qᵀ + q uᵀ (q stored in p)
        {
            let (rows, urow) = a.split_at_mut(xs);
            let u = &urow[..i];
            for r in 0..i {
                let row = &mut rows[idx(r, 0)..idx(r, 0) + r + 1];
                let ur = u[r];
                let qr = p[r];
                for ((x, &pc), &uc) in row.iter_mut().zip(&p[..=r]).zip(&u[..=r]) {
                    *x -= ur * pc + qr * uc;
                }
            }
        }
    }

    let d: Vec<f64> = (0..n).map(|i| a[idx(i, i)]).collect();
    e[0] = 0.0;
    (d, e)
}

/// All eigenvalues of a symmetric matrix, ascending (no eigenvectors; cheaper
/// for large matrices).
pub fn sym_eigvalues(m: &SymMatrix) -> Result<Vec<f64>, LinalgError> {
    check_cap(m.n())?;
    let (mut d, mut e) = tridiagonalize_packed(m);
    tql(&mut d, &mut e, None)?;
    sort_ascending(&mut d, None);
    Ok(d)
}

/// All eigenvalues of the symmetric tridiagonal matrix with the given
/// diagonal and off-diagonal, ascending.
pub fn tridiag_eig(diag: &[f64], offdiag: &[f64]) -> Result<Vec<f64>, LinalgError> {
    if offdiag.len() + 1 != diag.len() {
        return Err(LinalgError::ShapeMismatch { expected: diag.len() - 1, got: offdiag.len() });
    }
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(offdiag);
    tql(&mut d, &mut e, None)?;
    sort_ascending(&mut d, None);
    Ok(d)
}

/// All eigenvalues and eigenvectors of a symmetric tridiagonal matrix,
/// ascending; eigenvectors are the columns of the returned matrix.
pub fn tridiag_eig_vectors(diag: &[f64], offdiag: &[f64]) -> Result<(Vec<f64>, Mat), LinalgError> {
    if offdiag.len() + 1 != diag.len() {
        return Err(LinalgError::ShapeMismatch { expected: diag.len() - 1, got: offdiag.len() });
    }
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..].copy_from_slice(offdiag);
    let mut z = Mat::identity(n);
    tql(&mut d, &mut e, Some(&mut z))?;
    sort_ascending(&mut d, Some(&mut z));
    Ok((d, z))
}

/// Extremal eigenvalues of the symmetric definite pencil `A v = λ S v`
/// (`S` positive definite), computed through the Cholesky congruence
/// `L^{-1} A L^{-T}` which shares the pencil's spectrum.
pub fn gen_eig_extremes(a: &SymMatrix, s: &SymMatrix) -> Result<(f64, f64), LinalgError> {
    let all = gen_eig_all(a, s)?;
    Ok((all[0], all[all.len() - 1]))
}

/// All eigenvalues of the symmetric definite pencil `A v = λ S v`, ascending.
pub fn gen_eig_all(a: &SymMatrix, s: &SymMatrix) -> Result<Vec<f64>, LinalgError> {
    if a.n() != s.n() {
        return Err(LinalgError::ShapeMismatch { expected: s.n(), got: a.n() });
    }
    let f = cholesky(s)?;
    let reduced = f.reduce_pencil(a);
    sym_eigvalues(&reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn random_sym(n: usize, rng: &mut impl Rng) -> SymMatrix {
        SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let m = SymMatrix::from_diag(&[3.0, 1.0, 2.0]);
        let eig = sym_eig(&m).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 2.0).abs() < 1e-14);
        assert!((eig.values[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn tridiagonal_closed_form_n4() {
        // zero diagonal, unit off-diagonal: eigenvalues 2cos(jπ/5)
        let m = SymMatrix::from_fn(4, |i, j| if i == j + 1 { 1.0 } else { 0.0 });
        let eig = sym_eig(&m).unwrap();
        let expect = [-1.618034, -0.618034, 0.618034, 1.618034];
        for (v, e) in eig.values.iter().zip(expect) {
            assert!((v - e).abs() < 1e-6, "got {v}, expected {e}");
        }
    }

    #[test]
    fn trace_identity_random() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        for n in [2, 7, 31, 60] {
            let m = random_sym(n, &mut rng);
            let values = sym_eigvalues(&m).unwrap();
            let sum: f64 = values.iter().sum();
            let tr = m.trace();
            assert!(
                (sum - tr).abs() <= 1e-10 * tr.abs().max(1.0),
                "trace mismatch at n = {n}: {sum} vs {tr}"
            );
        }
    }

    #[test]
    fn residual_and_orthonormality_on_100_random_matrices() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(23);
        for trial in 0..100 {
            let n = rng.gen_range(2..40);
            let m = random_sym(n, &mut rng);
            let eig = sym_eig(&m).unwrap();
            let norm = m.frob_norm().max(1e-300);
            for (idx, &lam) in eig.values.iter().enumerate() {
                let v: Vec<f64> = (0..n).map(|k| eig.vectors.get(k, idx)).collect();
                let mv = m.matvec(&v);
                let mut res = 0.0;
                for k in 0..n {
                    res += (mv[k] - lam * v[k]).powi(2);
                }
                assert!(
                    res.sqrt() <= 1e-9 * norm,
                    "trial {trial}: residual {:e} for eigenvalue {lam}",
                    res.sqrt()
                );
            }
            // orthonormality of the eigenvector matrix
            for i in 0..n {
                for j in 0..=i {
                    let mut dot = 0.0;
                    for k in 0..n {
                        dot += eig.vectors.get(k, i) * eig.vectors.get(k, j);
                    }
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!(
                        (dot - expect).abs() <= 1e-10,
                        "trial {trial}: v{i}·v{j} = {dot}"
                    );
                }
            }
        }
    }

    #[test]
    fn sym_eig_matches_sym_eigvalues() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let m = random_sym(25, &mut rng);
        let a = sym_eig(&m).unwrap().values;
        let b = sym_eigvalues(&m).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-11);
        }
    }

    #[test]
    fn tridiag_eig_quadratic_example() {
        // diag [-1, 0], offdiag [1]: roots of λ² + λ − 1
        let vals = tridiag_eig(&[-1.0, 0.0], &[1.0]).unwrap();
        assert!((vals[0] - (-1.618034)).abs() < 1e-6);
        assert!((vals[1] - 0.618034).abs() < 1e-6);
    }

    #[test]
    fn tridiag_eig_single_entry() {
        let vals = tridiag_eig(&[4.25], &[]).unwrap();
        assert_eq!(vals, vec![4.25]);
    }

    #[test]
    fn tridiag_eig_chebyshev_chain_vs_dense() {
        for k in [3usize, 6, 11] {
            let diag = vec![0.0; k];
            let off = vec![1.0; k - 1];
            let t = tridiag_eig(&diag, &off).unwrap();
            for (j, v) in t.iter().enumerate() {
                // ascending: j-th value is 2cos((k−j)π/(k+1))
                let expect = 2.0 * (std::f64::consts::PI * (k - j) as f64 / (k as f64 + 1.0)).cos();
                assert!((v - expect).abs() < 1e-12, "k = {k}: {v} vs {expect}");
            }
            // cross-check the dense solver on the same matrix
            let m = SymMatrix::from_fn(k, |i, j| if i == j + 1 { 1.0 } else { 0.0 });
            let dense = sym_eigvalues(&m).unwrap();
            for (a, b) in t.iter().zip(&dense) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tridiag_shape_mismatch() {
        assert!(matches!(
            tridiag_eig(&[1.0, 2.0], &[1.0, 1.0]),
            Err(LinalgError::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn dimension_cap_is_enforced() {
        // cap check happens before any work
        let err = check_cap(DEFAULT.dense_eig_cap + 1);
        assert!(matches!(err, Err(LinalgError::DimensionCap { .. })));
    }

    #[test]
    fn gen_eig_pencil_identity_and_scaling() {
        let s = SymMatrix::from_rows(2, &[4.0, 1.0, 1.0, 3.0]).unwrap();
        let (lo, hi) = gen_eig_extremes(&s, &s).unwrap();
        assert!((lo - 1.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
        let a = s.scaled(2.0);
        let (lo, hi) = gen_eig_extremes(&a, &s).unwrap();
        assert!((lo - 2.0).abs() < 1e-12 && (hi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gen_eig_diagonal_ratio() {
        let a = SymMatrix::from_diag(&[1.0, 4.0]);
        let s = SymMatrix::from_diag(&[1.0, 2.0]);
        let (lo, hi) = gen_eig_extremes(&a, &s).unwrap();
        assert!((lo - 1.0).abs() < 1e-12);
        assert!((hi - 2.0).abs() < 1e-12);
    }

    #[test]
    fn gen_eig_shift_consistency() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(31);
        let b = Mat::from_fn(12, 12, |_, _| rng.gen_range(-1.0..1.0));
        let mut s = SymMatrix::gram(&b);
        s.add_scaled_identity(0.8);
        let a = random_sym(12, &mut rng);
        let c = 0.37;
        let mut shifted = a.clone();
        for i in 0..12 {
            for j in 0..=i {
                shifted.set(i, j, a.get(i, j) + c * s.get(i, j));
            }
        }
        let (lo, hi) = gen_eig_extremes(&a, &s).unwrap();
        let (lo2, hi2) = gen_eig_extremes(&shifted, &s).unwrap();
        assert!((lo2 - lo - c).abs() < 1e-10);
        assert!((hi2 - hi - c).abs() < 1e-10);
    }
}
