//! Shared fixtures for the criterion benchmarks.

use kronfem::{
    assemble_poisson_product, interval_mesh, AssembledProblem, DirichletData, PoissonProblem,
    ProductSpace, RhsMode,
};

/// Poisson problem on an n x n interval product with a smooth forcing.
pub fn poisson_interval_product(n: usize) -> AssembledProblem {
    let space = ProductSpace::new(
        interval_mesh(n, 0.0, 1.0).unwrap(),
        interval_mesh(n, 0.0, 1.0).unwrap(),
    );
    assemble_poisson_product(&PoissonProblem {
        space,
        rhs_mode: RhsMode::ConsistentMass,
        forcing: Box::new(|x| (x[0] + 2.0 * x[1]).sin()),
        dirichlet: DirichletData::homogeneous(),
    })
    .unwrap()
}
