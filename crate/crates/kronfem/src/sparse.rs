//! Compressed sparse row matrices.
//!
//! The format is standard CSR with column indices sorted within each row and
//! duplicate triplets summed at construction. Entries whose value is exactly
//! zero are kept when explicitly inserted; assembled operators rely on this
//! so that structural patterns (and Kronecker nnz counts) stay predictable.

use crate::error::{Error, Result};

/// Sparse matrix in compressed sparse row format.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    pub(crate) row_ptr: Vec<usize>,
    pub(crate) col_idx: Vec<usize>,
    pub(crate) values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds a matrix from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(
        nrows: usize,
        ncols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        for &(r, c, _) in triplets {
            if r >= nrows || c >= ncols {
                return Err(Error::OutOfRange(format!(
                    "triplet ({r}, {c}) outside {nrows}x{ncols} matrix"
                )));
            }
        }
        let mut sorted = triplets.to_vec();
        sorted.sort_unstable_by_key(|&(r, c, _)| (r, c));

        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values = Vec::with_capacity(sorted.len());
        for &(r, c, v) in &sorted {
            if col_idx.len() > row_ptr[r] && *col_idx.last().unwrap() == c {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
            }
            row_ptr[r + 1] = col_idx.len();
        }
        // Rows with no entries inherit the running offset.
        for r in 1..=nrows {
            row_ptr[r] = row_ptr[r].max(row_ptr[r - 1]);
        }
        Ok(CsrMatrix { nrows, ncols, row_ptr, col_idx, values })
    }

    /// Matrix with no stored entries.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        CsrMatrix {
            nrows,
            ncols,
            row_ptr: vec![0; nrows + 1],
            col_idx: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Identity matrix of order `n`.
    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries (including stored zeros).
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored value at `(i, j)`, or zero if the entry is not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(i < self.nrows && j < self.ncols, "index ({i}, {j}) out of range");
        let cols = &self.col_idx[self.row_ptr[i]..self.row_ptr[i + 1]];
        match cols.binary_search(&j) {
            Ok(k) => self.values[self.row_ptr[i] + k],
            Err(_) => 0.0,
        }
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    /// `y = A x` into a caller-provided buffer.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols, "matvec input length");
        assert_eq!(y.len(), self.nrows, "matvec output length");
        for (i, out) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *out = acc;
        }
    }

    /// `A x` as a new vector.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows];
        self.matvec_into(x, &mut y);
        y
    }

    /// Transposed copy.
    pub fn transpose(&self) -> CsrMatrix {
        let mut row_ptr = vec![0usize; self.ncols + 1];
        for &c in &self.col_idx {
            row_ptr[c + 1] += 1;
        }
        for c in 0..self.ncols {
            row_ptr[c + 1] += row_ptr[c];
        }
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        let mut next = row_ptr.clone();
        for r in 0..self.nrows {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                let c = self.col_idx[k];
                col_idx[next[c]] = r;
                values[next[c]] = self.values[k];
                next[c] += 1;
            }
        }
        CsrMatrix { nrows: self.ncols, ncols: self.nrows, row_ptr, col_idx, values }
    }

    /// Entrywise `alpha * A + beta * B`. Shapes must match.
    pub fn linear_combination(alpha: f64, a: &CsrMatrix, beta: f64, b: &CsrMatrix) -> Result<CsrMatrix> {
        if a.nrows != b.nrows || a.ncols != b.ncols {
            return Err(Error::DimensionMismatch(format!(
                "cannot combine {}x{} with {}x{}",
                a.nrows, a.ncols, b.nrows, b.ncols
            )));
        }
        let mut row_ptr = vec![0usize; a.nrows + 1];
        let mut col_idx = Vec::with_capacity(a.nnz() + b.nnz());
        let mut values = Vec::with_capacity(a.nnz() + b.nnz());
        for r in 0..a.nrows {
            let (mut i, end_a) = (a.row_ptr[r], a.row_ptr[r + 1]);
            let (mut j, end_b) = (b.row_ptr[r], b.row_ptr[r + 1]);
            while i < end_a || j < end_b {
                let ca = if i < end_a { a.col_idx[i] } else { usize::MAX };
                let cb = if j < end_b { b.col_idx[j] } else { usize::MAX };
                if ca < cb {
                    col_idx.push(ca);
                    values.push(alpha * a.values[i]);
                    i += 1;
                } else if cb < ca {
                    col_idx.push(cb);
                    values.push(beta * b.values[j]);
                    j += 1;
                } else {
                    col_idx.push(ca);
                    values.push(alpha * a.values[i] + beta * b.values[j]);
                    i += 1;
                    j += 1;
                }
            }
            row_ptr[r + 1] = col_idx.len();
        }
        Ok(CsrMatrix { nrows: a.nrows, ncols: a.ncols, row_ptr, col_idx, values })
    }

    /// Entrywise sum.
    pub fn add(&self, other: &CsrMatrix) -> Result<CsrMatrix> {
        CsrMatrix::linear_combination(1.0, self, 1.0, other)
    }

    /// Multiplies all stored values in place.
    pub fn scale(&mut self, factor: f64) {
        for v in &mut self.values {
            *v *= factor;
        }
    }

    /// Scaled copy.
    pub fn scaled(&self, factor: f64) -> CsrMatrix {
        let mut out = self.clone();
        out.scale(factor);
        out
    }

    /// Row-major dense copy; intended for small matrices in tests and debugging.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut dense = vec![0.0; self.nrows * self.ncols];
        for r in 0..self.nrows {
            for (c, v) in self.row(r) {
                dense[r * self.ncols + c] += v;
            }
        }
        dense
    }

    /// Sum of each row's stored values.
    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.nrows)
            .map(|r| self.row(r).map(|(_, v)| v).sum())
            .collect()
    }

    pub(crate) fn from_raw(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        debug_assert_eq!(row_ptr.len(), nrows + 1);
        debug_assert_eq!(col_idx.len(), values.len());
        debug_assert_eq!(*row_ptr.last().unwrap(), col_idx.len());
        debug_assert!(
            (0..nrows).all(|r| row_ptr[r] <= row_ptr[r + 1]
                && col_idx[row_ptr[r]..row_ptr[r + 1]].windows(2).all(|w| w[0] < w[1])),
            "rows must be sorted with unique columns"
        );
        CsrMatrix { nrows, ncols, row_ptr, col_idx, values }
    }
}
