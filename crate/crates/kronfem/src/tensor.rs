//! Product-domain indexing and Kronecker-structured operators.
//!
//! A product space pairs a mesh of the first subdomain (n1 nodes) with a mesh
//! of the second (n2 nodes). Product basis functions and degrees of freedom
//! are indexed `g = i * n2 + j`, first subdomain outermost. With that layout
//! `kron(A, B)[i * n2 + k, j * n2 + l] = A[i, j] * B[k, l]`, so operators of
//! the form `sum_t c_t * kron(A_t, B_t)` act on coefficient vectors either
//! materialized or matrix-free via the reshape identity
//! `kron(A, B) x = vec(A X B^T)` with `X` the row-major `n1 x n2` reshape.

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::sparse::CsrMatrix;

/// Tensor-product function space over two subdomain meshes.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    mesh1: Mesh,
    mesh2: Mesh,
}

impl ProductSpace {
    pub fn new(mesh1: Mesh, mesh2: Mesh) -> Self {
        ProductSpace { mesh1, mesh2 }
    }

    pub fn mesh1(&self) -> &Mesh {
        &self.mesh1
    }

    pub fn mesh2(&self) -> &Mesh {
        &self.mesh2
    }

    /// Nodes in the first subdomain.
    pub fn n1(&self) -> usize {
        self.mesh1.n_nodes()
    }

    /// Nodes in the second subdomain.
    pub fn n2(&self) -> usize {
        self.mesh2.n_nodes()
    }

    /// Total product degrees of freedom, `n1 * n2`.
    pub fn n_dofs(&self) -> usize {
        self.n1() * self.n2()
    }

    /// Coordinate dimension of the product domain.
    pub fn dim(&self) -> usize {
        self.mesh1.dim() + self.mesh2.dim()
    }

    /// Flat index of the pair `(i, j)`.
    pub fn product_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.n1() && j < self.n2());
        i * self.n2() + j
    }

    /// Inverse of [`product_index`](Self::product_index).
    pub fn split_index(&self, g: usize) -> (usize, usize) {
        debug_assert!(g < self.n_dofs());
        (g / self.n2(), g % self.n2())
    }

    /// Concatenated coordinates of product dof `g`, first subdomain first.
    pub fn dof_coords(&self, g: usize) -> Vec<f64> {
        let (i, j) = self.split_index(g);
        let mut coords = Vec::with_capacity(self.dim());
        coords.extend_from_slice(self.mesh1.node(i));
        coords.extend_from_slice(self.mesh2.node(j));
        coords
    }

    /// Evaluates `f` at every product node, in dof order.
    pub fn interpolate(&self, f: impl Fn(&[f64]) -> f64) -> Vec<f64> {
        let mut coords = vec![0.0; self.dim()];
        let d1 = self.mesh1.dim();
        let mut out = Vec::with_capacity(self.n_dofs());
        for i in 0..self.n1() {
            coords[..d1].copy_from_slice(self.mesh1.node(i));
            for j in 0..self.n2() {
                coords[d1..].copy_from_slice(self.mesh2.node(j));
                out.push(f(&coords));
            }
        }
        out
    }
}

/// Kronecker product of two sparse matrices.
///
/// The result has `nnz(a) * nnz(b)` stored entries.
pub fn kron(a: &CsrMatrix, b: &CsrMatrix) -> Result<CsrMatrix> {
    let nrows = a
        .nrows()
        .checked_mul(b.nrows())
        .ok_or_else(|| Error::DimensionMismatch("kron row count overflows usize".into()))?;
    let ncols = a
        .ncols()
        .checked_mul(b.ncols())
        .ok_or_else(|| Error::DimensionMismatch("kron column count overflows usize".into()))?;
    let nnz = a.nnz() * b.nnz();

    let mut row_ptr = Vec::with_capacity(nrows + 1);
    let mut col_idx = Vec::with_capacity(nnz);
    let mut values = Vec::with_capacity(nnz);
    row_ptr.push(0);
    for i in 0..a.nrows() {
        for k in 0..b.nrows() {
            for (j, av) in a.row(i) {
                for (l, bv) in b.row(k) {
                    col_idx.push(j * b.ncols() + l);
                    values.push(av * bv);
                }
            }
            row_ptr.push(col_idx.len());
        }
    }
    debug_assert_eq!(col_idx.len(), nnz);
    Ok(CsrMatrix::from_raw(nrows, ncols, row_ptr, col_idx, values))
}

/// One term `coeff * kron(left, right)` of a Kronecker sum.
#[derive(Debug, Clone)]
pub struct KronTerm {
    pub coeff: f64,
    pub left: CsrMatrix,
    pub right: CsrMatrix,
}

impl KronTerm {
    pub fn new(coeff: f64, left: CsrMatrix, right: CsrMatrix) -> Self {
        KronTerm { coeff, left, right }
    }
}

/// Linear operator `sum_t coeff_t * kron(left_t, right_t)`.
///
/// All terms must share factor shapes. The operator can be applied without
/// ever forming the global matrix, or materialized into one [`CsrMatrix`].
#[derive(Debug, Clone)]
pub struct KronSumOperator {
    terms: Vec<KronTerm>,
}

impl KronSumOperator {
    pub fn new(terms: Vec<KronTerm>) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("operator needs at least one term".into()))?;
        let shape = (
            first.left.nrows(),
            first.left.ncols(),
            first.right.nrows(),
            first.right.ncols(),
        );
        for t in &terms {
            let s = (t.left.nrows(), t.left.ncols(), t.right.nrows(), t.right.ncols());
            if s != shape {
                return Err(Error::DimensionMismatch(format!(
                    "term factor shapes {s:?} differ from {shape:?}"
                )));
            }
            if !t.coeff.is_finite() {
                return Err(Error::NonFiniteValue("term coefficient".into()));
            }
        }
        Ok(KronSumOperator { terms })
    }

    pub fn terms(&self) -> &[KronTerm] {
        &self.terms
    }

    pub fn nrows(&self) -> usize {
        self.terms[0].left.nrows() * self.terms[0].right.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.terms[0].left.ncols() * self.terms[0].right.ncols()
    }

    /// Applies the operator without materializing it: for each term computes
    /// `vec(A (X B^T))` on the row-major reshape `X` of `x`.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols(), "operator input length");
        assert_eq!(y.len(), self.nrows(), "operator output length");
        y.fill(0.0);
        let n2c = self.terms[0].right.ncols();
        let n2r = self.terms[0].right.nrows();
        let mut w = vec![0.0; n2c];
        for term in &self.terms {
            let (a, b, c) = (&term.left, &term.right, term.coeff);
            for i in 0..a.nrows() {
                // w = (A X)[i, :] accumulated from the rows of X.
                w.fill(0.0);
                for (j, av) in a.row(i) {
                    let xrow = &x[j * n2c..(j + 1) * n2c];
                    for (wk, &xk) in w.iter_mut().zip(xrow) {
                        *wk += av * xk;
                    }
                }
                let yrow = &mut y[i * n2r..(i + 1) * n2r];
                for (k, yk) in yrow.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (l, bv) in b.row(k) {
                        acc += bv * w[l];
                    }
                    *yk += c * acc;
                }
            }
        }
    }

    /// Applies the operator, allocating the result.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.nrows()];
        self.apply_into(x, &mut y);
        y
    }

    /// Assembles the full sparse matrix `sum_t coeff_t * kron(left_t, right_t)`.
    pub fn materialize(&self) -> Result<CsrMatrix> {
        let mut acc = kron(&self.terms[0].left, &self.terms[0].right)?;
        acc.scale(self.terms[0].coeff);
        for term in &self.terms[1..] {
            let k = kron(&term.left, &term.right)?;
            acc = CsrMatrix::linear_combination(1.0, &acc, term.coeff, &k)?;
        }
        Ok(acc)
    }
}
