//! Tensor-product P1 finite elements on Cartesian-product domains.
//!
//! A PDE on `D1 x D2` is discretized with products of P1 hat functions from
//! independent simplex meshes of the two factors. Every bilinear form that
//! separates across the factors becomes a sum of Kronecker products of small
//! per-subdomain matrices, so the global operator is stored as
//! [`KronSumOperator`]: a list of `(coefficient, left, right)` terms that can
//! be applied matrix-free or materialized for a direct factorization. This
//! makes problems tractable whose full dimension (for example 4D) would be
//! awkward to mesh directly.
//!
//! The crate covers mesh construction ([`mesh`]), per-subdomain assembly of
//! mass, stiffness, advection, and streamline-stabilization forms
//! ([`assembly`]), the Kronecker algebra ([`tensor`]), Dirichlet constraints
//! on product boundaries ([`constraints`]), direct and conjugate-gradient
//! solves ([`solve`]), ready-made Poisson, space-time wave, and
//! advection-diffusion problems ([`problems`]), and manufactured-solution
//! convergence studies ([`verify`]).
//!
//! ```
//! use kronfem::{
//!     assemble_poisson_product, interval_mesh, DirichletData, PoissonProblem, ProductSpace,
//!     RhsMode, SolveMethod,
//! };
//!
//! // -lap u = 1 on the unit square as a product of two intervals.
//! let space = ProductSpace::new(
//!     interval_mesh(8, 0.0, 1.0)?,
//!     interval_mesh(8, 0.0, 1.0)?,
//! );
//! let assembled = assemble_poisson_product(&PoissonProblem {
//!     space: space.clone(),
//!     rhs_mode: RhsMode::ConsistentMass,
//!     forcing: Box::new(|_| 1.0),
//!     dirichlet: DirichletData::homogeneous(),
//! })?;
//! let report = assembled.solve(SolveMethod::Direct)?;
//!
//! // The center value of the square's Poisson problem is about 0.0737.
//! let center = space.product_index(4, 4);
//! assert!((report.solution[center] - 0.0737).abs() < 5e-3);
//! # Ok::<(), kronfem::Error>(())
//! ```

pub mod assembly;
pub mod constraints;
pub mod error;
pub mod mesh;
pub mod problems;
pub mod solve;
pub mod sparse;
pub mod tensor;
pub mod verify;

pub use assembly::{assemble_matrix, assemble_vector, FormKind, SubdomainForms, VectorFormKind};
pub use constraints::{
    apply_dirichlet, boundary_values, constrained_dofs, lift_rhs_with_operator, DirichletData,
    FaceSelection,
};
pub use error::{Error, Result};
pub use mesh::{interval_mesh, unit_square_mesh, Diagonal, Mesh};
pub use problems::{
    assemble_advdiff_supg, assemble_poisson_product, assemble_wave_spacetime, compute_tau,
    AdvectionDiffusionProblem, AssembledProblem, Field, PoissonProblem, RhsMode, SupgVariant,
    WaveProblem, DEFAULT_CG_MAX_ITERATIONS, DEFAULT_CG_TOL,
};
pub use solve::{
    solve_cg, solve_direct, LinearOperator, SolveMethod, SolveReport, DIRECT_RESIDUAL_TOL,
};
pub use sparse::CsrMatrix;
pub use tensor::{kron, KronSumOperator, KronTerm, ProductSpace};
pub use verify::{
    convergence_rate, error_metrics, exact_advdiff, run_study, wave_time_cells, ConvergenceRow,
    ErrorMetrics, ManufacturedCase, StudyOptions,
};
