//! Crate-wide error type.
//!
//! Every fallible operation returns [`Result`]. Variants distinguish
//! configuration mistakes (bad meshes, mismatched dimensions, invalid
//! parameters) from numerical failures (singular systems, stalled
//! iterations), because callers map them to different exit codes.

/// Errors produced by meshing, assembly, constraint application and solves.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Mesh construction or validation failed.
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    /// Operands have incompatible shapes or lengths.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An index refers outside its container.
    #[error("index out of range: {0}")]
    OutOfRange(String),

    /// A scalar or enum parameter violates its precondition.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The requested variational form is not defined on the given mesh.
    #[error("unsupported form: {0}")]
    UnsupportedForm(String),

    /// A supplied evaluator produced NaN or infinity.
    #[error("non-finite value: {0}")]
    NonFiniteValue(String),

    /// Factorization failed because the matrix is singular.
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// The iterative solver hit its iteration cap before reaching tolerance.
    #[error("no convergence after {iterations} iterations (relative residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    /// Conjugate gradients observed a non-positive curvature direction.
    #[error("operator is not positive definite (detected at iteration {iteration})")]
    NotPositiveDefinite { iteration: usize },

    /// A direct solve finished but its residual exceeds the accepted bound.
    #[error("solve residual {residual:.3e} exceeds tolerance {tolerance:.1e}")]
    ResidualAboveTolerance { residual: f64, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
