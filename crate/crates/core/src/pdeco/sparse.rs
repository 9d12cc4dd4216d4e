//! Compressed sparse row storage for the finite-element matrices.

/// CSR matrix with sorted column indices per row.
#[derive(Clone, Debug)]
pub struct Csr {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl Csr {
    /// Build from (row, col, value) triplets, summing duplicates.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, f64)>,
    ) -> Self {
        let mut per_row: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet out of bounds");
            per_row[i].push((j, v));
        }
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_ptr.push(0);
        for row in &mut per_row {
            row.sort_by_key(|&(j, _)| j);
            let mut last: Option<usize> = None;
            for &(j, v) in row.iter() {
                if last == Some(j) {
                    *vals.last_mut().unwrap() += v;
                } else {
                    cols.push(j);
                    vals.push(v);
                    last = Some(j);
                }
            }
            row_ptr.push(cols.len());
        }
        Csr { nrows, ncols, row_ptr, cols, vals }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (lo, hi) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[lo..hi], &self.vals[lo..hi])
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols, "matvec dimension mismatch");
        let mut y = vec![0.0; self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            let mut acc = 0.0;
            for (c, v) in cols.iter().zip(vals) {
                acc += v * x[*c];
            }
            y[i] = acc;
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        assert_eq!(self.nrows, self.ncols);
        (0..self.nrows)
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().position(|&c| c == i).map(|p| vals[p]).unwrap_or(0.0)
            })
            .collect()
    }

    /// `self + other` entrywise.
    pub fn add(&self, other: &Csr) -> Csr {
        assert_eq!((self.nrows, self.ncols), (other.nrows, other.ncols));
        let mut triplets = Vec::with_capacity(self.nnz() + other.nnz());
        for m in [self, other] {
            for i in 0..m.nrows {
                let (cols, vals) = m.row(i);
                for (c, v) in cols.iter().zip(vals) {
                    triplets.push((i, *c, *v));
                }
            }
        }
        Csr::from_triplets(self.nrows, self.ncols, triplets)
    }

    pub fn to_sym_matrix(&self) -> crate::linalg::SymMatrix {
        assert_eq!(self.nrows, self.ncols);
        let mut m = crate::linalg::SymMatrix::zeros(self.nrows);
        for i in 0..self.nrows {
            let (cols, vals) = self.row(i);
            for (c, v) in cols.iter().zip(vals) {
                if *c <= i {
                    m.set(i, *c, *v);
                }
            }
        }
        m
    }

    /// Largest `|i − j|` over stored entries.
    pub fn half_bandwidth(&self) -> usize {
        let mut bw = 0;
        for i in 0..self.nrows {
            let (cols, _) = self.row(i);
            for &c in cols {
                bw = bw.max(i.abs_diff(c));
            }
        }
        bw
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_matvec() {
        let m = Csr::from_triplets(
            2,
            3,
            vec![(0, 0, 1.0), (0, 0, 2.0), (0, 2, 1.0), (1, 1, -1.0)],
        );
        assert_eq!(m.nnz(), 3);
        let y = m.matvec(&[1.0, 2.0, 3.0]);
        assert_eq!(y, vec![6.0, -2.0]);
        assert_eq!(m.half_bandwidth(), 2);
    }

    #[test]
    fn add_and_diagonal() {
        let a = Csr::from_triplets(2, 2, vec![(0, 0, 1.0), (1, 0, 2.0)]);
        let b = Csr::from_triplets(2, 2, vec![(0, 0, 0.5), (1, 1, 3.0)]);
        let c = a.add(&b);
        assert_eq!(c.diagonal(), vec![1.5, 3.0]);
    }
}
