//! Dirichlet constraints on product-domain boundaries.
//!
//! Constraints are imposed by symmetric elimination: the lifted contribution
//! `A[:, d] * g[d]` moves to the right-hand side, constrained rows and columns
//! are zeroed, the diagonal is set to one and the right-hand side entry to the
//! boundary value. This keeps symmetric operators symmetric and is idempotent.

use std::fmt;

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;
use crate::tensor::{KronSumOperator, ProductSpace};

/// Which product-boundary faces carry Dirichlet data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceSelection {
    /// Constrain dofs whose first-subdomain node is on that boundary.
    pub omega1_boundary: bool,
    /// Constrain dofs whose second-subdomain node is on that boundary.
    pub omega2_boundary: bool,
    /// Drop the face at the far end of a 1D second subdomain from the
    /// constrained set (used when the second subdomain is time and the final
    /// slice must stay free).
    pub exclude_omega2_end: bool,
}

impl FaceSelection {
    /// The entire product boundary.
    pub fn full_boundary() -> Self {
        FaceSelection { omega1_boundary: true, omega2_boundary: true, exclude_omega2_end: false }
    }

    /// Lateral boundary plus the starting face of the second subdomain; the
    /// far face stays free.
    pub fn space_time_initial() -> Self {
        FaceSelection { omega1_boundary: true, omega2_boundary: true, exclude_omega2_end: true }
    }
}

/// Scalar field evaluated at product-domain coordinates.
pub type Field = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Boundary value evaluator over product-domain coordinates.
pub struct DirichletData {
    f: Field,
}

impl DirichletData {
    pub fn new(f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        DirichletData { f: Box::new(f) }
    }

    /// Zero everywhere.
    pub fn homogeneous() -> Self {
        DirichletData::constant(0.0)
    }

    pub fn constant(value: f64) -> Self {
        DirichletData::new(move |_| value)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }
}

impl fmt::Debug for DirichletData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("DirichletData(..)")
    }
}

/// Sorted indices of the product dofs selected by `sel`.
pub fn constrained_dofs(space: &ProductSpace, sel: &FaceSelection) -> Result<Vec<usize>> {
    let mask1 = if sel.omega1_boundary {
        space.mesh1().boundary_mask()
    } else {
        vec![false; space.n1()]
    };
    let mut mask2 = if sel.omega2_boundary {
        space.mesh2().boundary_mask()
    } else {
        vec![false; space.n2()]
    };
    if sel.exclude_omega2_end && sel.omega2_boundary {
        if space.mesh2().dim() != 1 {
            return Err(Error::InvalidParameter(
                "excluding the far face requires a 1D second subdomain".into(),
            ));
        }
        let end = space
            .mesh2()
            .boundary_nodes()
            .iter()
            .copied()
            .max_by(|&a, &b| {
                space.mesh2().node(a)[0]
                    .partial_cmp(&space.mesh2().node(b)[0])
                    .expect("finite coordinates")
            })
            .expect("1D mesh has boundary nodes");
        mask2[end] = false;
    }
    let mut dofs = Vec::new();
    for (i, &on_boundary1) in mask1.iter().enumerate() {
        for (j, &on_boundary2) in mask2.iter().enumerate() {
            if on_boundary1 || on_boundary2 {
                dofs.push(space.product_index(i, j));
            }
        }
    }
    Ok(dofs)
}

/// Evaluates `data` at the coordinates of each listed dof.
pub fn boundary_values(
    space: &ProductSpace,
    dofs: &[usize],
    data: &DirichletData,
) -> Result<Vec<f64>> {
    let mut values = Vec::with_capacity(dofs.len());
    for &d in dofs {
        if d >= space.n_dofs() {
            return Err(Error::OutOfRange(format!(
                "dof {d} outside space of {} dofs",
                space.n_dofs()
            )));
        }
        let v = data.eval(&space.dof_coords(d));
        if !v.is_finite() {
            return Err(Error::NonFiniteValue(format!("boundary data at dof {d}")));
        }
        values.push(v);
    }
    Ok(values)
}

fn check_constraint_args(n: usize, rhs: &[f64], dofs: &[usize], values: &[f64]) -> Result<()> {
    if rhs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} does not match system size {n}",
            rhs.len()
        )));
    }
    if dofs.len() != values.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} constrained dofs but {} boundary values",
            dofs.len(),
            values.len()
        )));
    }
    for pair in dofs.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::InvalidParameter(
                "constrained dofs must be strictly increasing".into(),
            ));
        }
    }
    if let Some(&last) = dofs.last() {
        if last >= n {
            return Err(Error::OutOfRange(format!("dof {last} outside system of size {n}")));
        }
    }
    if !values.iter().all(|v| v.is_finite()) {
        return Err(Error::NonFiniteValue("boundary value".into()));
    }
    Ok(())
}

/// Applies Dirichlet constraints to an assembled system by symmetric
/// elimination, returning the constrained matrix and right-hand side.
pub fn apply_dirichlet(
    a: &CsrMatrix,
    rhs: &[f64],
    dofs: &[usize],
    values: &[f64],
) -> Result<(CsrMatrix, Vec<f64>)> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "constraints need a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let n = a.nrows();
    check_constraint_args(n, rhs, dofs, values)?;

    let mut mask = vec![false; n];
    let mut value_of = vec![0.0; n];
    for (&d, &v) in dofs.iter().zip(values) {
        mask[d] = true;
        value_of[d] = v;
    }

    let mut out_rhs = rhs.to_vec();
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col_idx = Vec::with_capacity(a.nnz());
    let mut vals = Vec::with_capacity(a.nnz());
    row_ptr.push(0);
    for r in 0..n {
        if mask[r] {
            col_idx.push(r);
            vals.push(1.0);
        } else {
            for (c, v) in a.row(r) {
                if mask[c] {
                    out_rhs[r] -= v * value_of[c];
                } else {
                    col_idx.push(c);
                    vals.push(v);
                }
            }
        }
        row_ptr.push(col_idx.len());
    }
    for (&d, &v) in dofs.iter().zip(values) {
        out_rhs[d] = v;
    }
    Ok((CsrMatrix::from_raw(n, n, row_ptr, col_idx, vals), out_rhs))
}

/// Matrix-free analogue of [`apply_dirichlet`] for the right-hand side only:
/// lifts boundary values through the unconstrained operator so an iterative
/// solver can work on the projected system without materializing it.
pub fn lift_rhs_with_operator(
    op: &KronSumOperator,
    rhs: &[f64],
    dofs: &[usize],
    values: &[f64],
) -> Result<Vec<f64>> {
    if op.nrows() != op.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "constraints need a square operator, got {}x{}",
            op.nrows(),
            op.ncols()
        )));
    }
    let n = op.nrows();
    check_constraint_args(n, rhs, dofs, values)?;

    let mut lifted = vec![0.0; n];
    for (&d, &v) in dofs.iter().zip(values) {
        lifted[d] = v;
    }
    let mut out = rhs.to_vec();
    let correction = op.apply(&lifted);
    for (o, c) in out.iter_mut().zip(&correction) {
        *o -= c;
    }
    for (&d, &v) in dofs.iter().zip(values) {
        out[d] = v;
    }
    Ok(out)
}
