//! Linear solvers for assembled systems.
//!
//! [`solve_direct`] factors a materialized sparse matrix with an LU
//! decomposition. [`solve_cg`] runs conjugate gradients against any
//! [`LinearOperator`]; given a Kronecker-sum operator it never forms the
//! global matrix, and a list of constrained dofs is honored by projection so
//! the iterate keeps its pinned boundary values exactly.
//!
//! Both report the relative residual they achieved, recomputed with an
//! independent matrix-vector product rather than taken from solver internals.

use std::sync::Once;

use faer::prelude::*;
use faer::sparse::linalg::solvers::{Lu, SymbolicLu};
use faer::sparse::{SparseColMat, Triplet};

use crate::error::{Error, Result};
use crate::sparse::CsrMatrix;
use crate::tensor::KronSumOperator;

/// Residual bound a direct solve must meet to be reported as a success.
pub const DIRECT_RESIDUAL_TOL: f64 = 1e-10;

/// Anything that can apply itself to a vector.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply_into(&self, x: &[f64], y: &mut [f64]);
}

impl LinearOperator for CsrMatrix {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.matvec_into(x, y);
    }
}

impl LinearOperator for KronSumOperator {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.apply_into(x, y);
    }
}

/// How a system was solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Direct,
    ConjugateGradient,
}

/// Solution vector together with solve diagnostics.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub solution: Vec<f64>,
    pub method: SolveMethod,
    /// Factorizations count as zero iterations.
    pub iterations: usize,
    /// `|A x - b| / |b|` (absolute when `b = 0`), recomputed after the solve.
    pub residual_norm: f64,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn residual_denominator(rhs: &[f64]) -> f64 {
    let n = norm2(rhs);
    if n > 0.0 {
        n
    } else {
        1.0
    }
}

/// Sparse LU solve of `A x = rhs`.
///
/// Runs single-threaded so repeated solves of the same system produce
/// bit-identical solutions.
pub fn solve_direct(a: &CsrMatrix, rhs: &[f64]) -> Result<SolveReport> {
    static SEQUENTIAL: Once = Once::new();
    SEQUENTIAL.call_once(|| faer::set_global_parallelism(faer::Par::Seq));

    if a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "direct solve needs a square matrix, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if rhs.len() != a.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} does not match system size {}",
            rhs.len(),
            a.nrows()
        )));
    }
    let n = a.nrows();

    let mut triplets = Vec::with_capacity(a.nnz());
    for r in 0..n {
        for (c, v) in a.row(r) {
            triplets.push(Triplet::new(r, c, v));
        }
    }
    let mat = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &triplets)
        .map_err(|e| Error::SingularSystem(format!("could not build solver matrix: {e:?}")))?;
    let symbolic = SymbolicLu::try_new(mat.symbolic())
        .map_err(|e| Error::SingularSystem(format!("symbolic factorization failed: {e:?}")))?;
    // The numeric factorization reports structural rank loss as an error but
    // panics outright on an exactly zero pivot; catch that and report both
    // routes as a singular system.
    let lu = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| {
        Lu::try_new_with_symbolic(symbolic, mat.as_ref())
    }))
    .map_err(|_| Error::SingularSystem("numeric factorization found a zero pivot".into()))?
    .map_err(|e| Error::SingularSystem(format!("factorization failed: {e:?}")))?;

    let b = faer::Mat::<f64>::from_fn(n, 1, |i, _| rhs[i]);
    let x = lu.solve(&b);
    let solution: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if !solution.iter().all(|v| v.is_finite()) {
        return Err(Error::SingularSystem("factorization produced non-finite values".into()));
    }

    let denom = residual_denominator(rhs);
    let ax = a.matvec(&solution);
    let residual: f64 =
        norm2(&ax.iter().zip(rhs).map(|(a, b)| a - b).collect::<Vec<_>>()) / denom;
    if !residual.is_finite() || residual > 1e-2 {
        return Err(Error::SingularSystem(format!(
            "solution residual {residual:.3e} indicates a singular system"
        )));
    }
    if residual > DIRECT_RESIDUAL_TOL {
        return Err(Error::ResidualAboveTolerance {
            residual,
            tolerance: DIRECT_RESIDUAL_TOL,
        });
    }
    Ok(SolveReport { solution, method: SolveMethod::Direct, iterations: 0, residual_norm: residual })
}

/// Conjugate gradient solve of a symmetric positive definite system.
///
/// `rhs` must already carry lifted boundary data: entries listed in
/// `constrained` are read as pinned solution values and never change. Every
/// operator application is projected onto the free dofs, so the method solves
/// the same system that symmetric elimination would produce without needing
/// the matrix. `tol` bounds the relative residual.
pub fn solve_cg<O: LinearOperator + ?Sized>(
    op: &O,
    rhs: &[f64],
    tol: f64,
    max_iterations: usize,
    constrained: &[usize],
) -> Result<SolveReport> {
    if op.nrows() != op.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "cg needs a square operator, got {}x{}",
            op.nrows(),
            op.ncols()
        )));
    }
    let n = op.nrows();
    if rhs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "rhs length {} does not match system size {n}",
            rhs.len()
        )));
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidParameter(format!("cg tolerance must be positive, got {tol}")));
    }
    if max_iterations == 0 {
        return Err(Error::InvalidParameter("cg needs at least one iteration".into()));
    }
    for pair in constrained.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::InvalidParameter(
                "constrained dofs must be strictly increasing".into(),
            ));
        }
    }
    if constrained.last().is_some_and(|&d| d >= n) {
        return Err(Error::OutOfRange("constrained dof outside system".into()));
    }

    let project = |v: &mut [f64]| {
        for &d in constrained {
            v[d] = 0.0;
        }
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();

    // Pinned entries live in x from the start; the free part begins at zero,
    // so the initial projected residual is just the projected rhs.
    let mut x = vec![0.0; n];
    for &d in constrained {
        x[d] = rhs[d];
    }
    let denom = residual_denominator(rhs);
    let mut r = rhs.to_vec();
    project(&mut r);
    let mut rs = dot(&r, &r);

    let final_report = |op: &O, x: Vec<f64>, iterations: usize| {
        let mut free = x.clone();
        project(&mut free);
        let mut ax = vec![0.0; n];
        op.apply_into(&free, &mut ax);
        let mut res = vec![0.0; n];
        for i in 0..n {
            res[i] = rhs[i] - ax[i];
        }
        project(&mut res);
        SolveReport {
            solution: x,
            method: SolveMethod::ConjugateGradient,
            iterations,
            residual_norm: norm2(&res) / denom,
        }
    };

    if rs.sqrt() <= tol * denom {
        return Ok(final_report(op, x, 0));
    }

    let mut p = r.clone();
    let mut ap = vec![0.0; n];
    for iteration in 1..=max_iterations {
        op.apply_into(&p, &mut ap);
        project(&mut ap);
        let pap = dot(&p, &ap);
        if !pap.is_finite() || pap <= 0.0 {
            return Err(Error::NotPositiveDefinite { iteration });
        }
        let alpha = rs / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rs_next = dot(&r, &r);
        if rs_next.sqrt() <= tol * denom {
            return Ok(final_report(op, x, iteration));
        }
        let beta = rs_next / rs;
        rs = rs_next;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
    }
    Err(Error::NonConvergence { iterations: max_iterations, residual: rs.sqrt() / denom })
}
