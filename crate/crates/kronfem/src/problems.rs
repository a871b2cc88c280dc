//! Model problems assembled as Kronecker-sum systems on product domains.
//!
//! Each assembler builds per-subdomain P1 matrices, combines them into a
//! [`KronSumOperator`], produces the raw right-hand side, and selects the
//! Dirichlet dofs. The result can be solved either by materializing the
//! matrix for a direct factorization or matrix-free with conjugate gradients.
//!
//! Right-hand side modes: `LumpedMass` multiplies nodal forcing values by the
//! integral of each product test function (the row sums of the product mass
//! matrix, hence a lumped mass application); `ConsistentMass` applies the
//! consistent product mass matrix to the nodal interpolant of the forcing.

use crate::assembly::{assemble_matrix, assemble_vector, FormKind, SubdomainForms, VectorFormKind};
use crate::constraints::{
    apply_dirichlet, boundary_values, constrained_dofs, lift_rhs_with_operator, DirichletData,
    FaceSelection,
};
use crate::error::{Error, Result};
use crate::solve::{solve_cg, solve_direct, SolveMethod, SolveReport};
use crate::sparse::CsrMatrix;
use crate::tensor::{KronSumOperator, KronTerm, ProductSpace};

/// Default relative tolerance for iterative solves.
pub const DEFAULT_CG_TOL: f64 = 1e-12;
/// Default iteration cap for iterative solves.
pub const DEFAULT_CG_MAX_ITERATIONS: usize = 50_000;

pub use crate::constraints::Field;

/// How the forcing enters the right-hand side.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RhsMode {
    /// Nodal forcing times the integral of each product test function.
    LumpedMass,
    /// Consistent product mass matrix applied to the nodal forcing.
    ConsistentMass,
}

/// Poisson problem `-lap u = f` on the product of two subdomains.
pub struct PoissonProblem {
    pub space: ProductSpace,
    pub rhs_mode: RhsMode,
    pub forcing: Field,
    pub dirichlet: DirichletData,
}

/// Wave problem `u_tt = c^2 lap u` with the second subdomain as time.
///
/// Dirichlet data constrains the whole space-time boundary, the final-time
/// face included. With P1 elements the endpoint flux in the temporal matrix
/// cancels the first and last test rows exactly, so leaving the final face
/// free yields a near-singular algebraic problem whose solution does not
/// converge; pinning it from the supplied data restores a well-posed
/// interior Galerkin system. Verification data must therefore supply the
/// final-time trace.
pub struct WaveProblem {
    pub space: ProductSpace,
    pub wave_speed: f64,
    pub dirichlet: DirichletData,
}

/// Which streamline-stabilized operator layout to assemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupgVariant {
    /// Velocity supported on the second subdomain only; assembles the reduced
    /// term list.
    Aligned,
    /// Full term list with velocity components on both subdomains.
    General,
}

/// Advection-diffusion problem `-kappa lap u + b . grad u = f` with
/// streamline (SUPG) stabilization weighted by `tau`.
pub struct AdvectionDiffusionProblem {
    pub space: ProductSpace,
    pub diffusivity: f64,
    /// Velocity over the full product domain; the first `dim(mesh1)`
    /// components act on the first subdomain.
    pub velocity: Vec<f64>,
    pub tau: f64,
    pub rhs_mode: RhsMode,
    pub variant: SupgVariant,
    pub forcing: Field,
    pub dirichlet: DirichletData,
}

/// An assembled problem ready to solve along either path.
pub struct AssembledProblem {
    /// Unconstrained Kronecker-sum operator.
    pub operator: KronSumOperator,
    /// Right-hand side before constraints.
    pub raw_rhs: Vec<f64>,
    /// Sorted Dirichlet dofs.
    pub constrained_dofs: Vec<usize>,
    /// Boundary value per constrained dof.
    pub boundary_values: Vec<f64>,
}

impl AssembledProblem {
    /// Materializes the operator and applies the constraints.
    pub fn constrained_system(&self) -> Result<(CsrMatrix, Vec<f64>)> {
        let matrix = self.operator.materialize()?;
        apply_dirichlet(&matrix, &self.raw_rhs, &self.constrained_dofs, &self.boundary_values)
    }

    /// Lifted right-hand side computed through the operator, for matrix-free
    /// solves.
    pub fn lifted_rhs(&self) -> Result<Vec<f64>> {
        lift_rhs_with_operator(
            &self.operator,
            &self.raw_rhs,
            &self.constrained_dofs,
            &self.boundary_values,
        )
    }

    /// Solves with default iterative settings.
    pub fn solve(&self, method: SolveMethod) -> Result<SolveReport> {
        self.solve_with(method, DEFAULT_CG_TOL, DEFAULT_CG_MAX_ITERATIONS)
    }

    /// Solves the constrained system. The direct path factors the
    /// materialized matrix; the iterative path never materializes.
    pub fn solve_with(
        &self,
        method: SolveMethod,
        cg_tol: f64,
        cg_max_iterations: usize,
    ) -> Result<SolveReport> {
        match method {
            SolveMethod::Direct => {
                let (matrix, rhs) = self.constrained_system()?;
                solve_direct(&matrix, &rhs)
            }
            SolveMethod::ConjugateGradient => {
                let rhs = self.lifted_rhs()?;
                solve_cg(&self.operator, &rhs, cg_tol, cg_max_iterations, &self.constrained_dofs)
            }
        }
    }
}

fn nodal_forcing(space: &ProductSpace, forcing: &Field) -> Result<Vec<f64>> {
    let values = space.interpolate(|x| forcing(x));
    if let Some(g) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue(format!("forcing at dof {g}")));
    }
    Ok(values)
}

/// `rhs[g] = f(x_g) * weight1[i] * weight2[j]`, the lumped-mass load.
fn lumped_rhs(space: &ProductSpace, f_nodal: &[f64], w1: &[f64], w2: &[f64]) -> Vec<f64> {
    let mut rhs = Vec::with_capacity(space.n_dofs());
    for i in 0..space.n1() {
        for j in 0..space.n2() {
            rhs.push(f_nodal[space.product_index(i, j)] * w1[i] * w2[j]);
        }
    }
    rhs
}

/// Assembles the Poisson operator `kron(K1, M2) + kron(M1, K2)` with the
/// requested right-hand side and full-boundary Dirichlet data.
pub fn assemble_poisson_product(problem: &PoissonProblem) -> Result<AssembledProblem> {
    let space = &problem.space;
    let stiffness1 = assemble_matrix(space.mesh1(), &FormKind::Stiffness)?;
    let mass1 = assemble_matrix(space.mesh1(), &FormKind::Mass)?;
    let stiffness2 = assemble_matrix(space.mesh2(), &FormKind::Stiffness)?;
    let mass2 = assemble_matrix(space.mesh2(), &FormKind::Mass)?;

    let f_nodal = nodal_forcing(space, &problem.forcing)?;
    let raw_rhs = match problem.rhs_mode {
        RhsMode::LumpedMass => {
            let load1 = assemble_vector(space.mesh1(), &VectorFormKind::Load)?;
            let load2 = assemble_vector(space.mesh2(), &VectorFormKind::Load)?;
            lumped_rhs(space, &f_nodal, &load1, &load2)
        }
        RhsMode::ConsistentMass => {
            let mass_op =
                KronSumOperator::new(vec![KronTerm::new(1.0, mass1.clone(), mass2.clone())])?;
            mass_op.apply(&f_nodal)
        }
    };

    let operator = KronSumOperator::new(vec![
        KronTerm::new(1.0, stiffness1, mass2),
        KronTerm::new(1.0, mass1, stiffness2),
    ])?;
    let dofs = constrained_dofs(space, &FaceSelection::full_boundary())?;
    let values = boundary_values(space, &dofs, &problem.dirichlet)?;
    Ok(AssembledProblem { operator, raw_rhs, constrained_dofs: dofs, boundary_values: values })
}

/// Assembles the space-time wave operator
/// `c^2 kron(K1, M2) - kron(M1, K2b)` where `K2b` is the temporal stiffness
/// with its endpoint flux. The right-hand side is zero before lifting.
pub fn assemble_wave_spacetime(problem: &WaveProblem) -> Result<AssembledProblem> {
    let space = &problem.space;
    if space.mesh2().dim() != 1 {
        return Err(Error::InvalidParameter(
            "the wave problem needs a 1D (time) second subdomain".into(),
        ));
    }
    if !(problem.wave_speed.is_finite() && problem.wave_speed > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "wave speed must be positive, got {}",
            problem.wave_speed
        )));
    }
    let c2 = problem.wave_speed * problem.wave_speed;
    let stiffness1 = assemble_matrix(space.mesh1(), &FormKind::Stiffness)?;
    let mass1 = assemble_matrix(space.mesh1(), &FormKind::Mass)?;
    let mass2 = assemble_matrix(space.mesh2(), &FormKind::Mass)?;
    let temporal = assemble_matrix(space.mesh2(), &FormKind::TemporalStiffnessWithBoundary)?;

    let operator = KronSumOperator::new(vec![
        KronTerm::new(c2, stiffness1, mass2),
        KronTerm::new(-1.0, mass1, temporal),
    ])?;
    let raw_rhs = vec![0.0; space.n_dofs()];
    let dofs = constrained_dofs(space, &FaceSelection::full_boundary())?;
    let values = boundary_values(space, &dofs, &problem.dirichlet)?;
    Ok(AssembledProblem { operator, raw_rhs, constrained_dofs: dofs, boundary_values: values })
}

/// Optimal streamline stabilization weight
/// `tau = h / (2 |b|) * (coth(Pe) - 1 / Pe)` with `Pe = |b| h / (2 kappa)`.
///
/// Below `Pe = 1e-4` the series limit `Pe / 3` is used, which also covers
/// zero velocity and gives the diffusion limit `h^2 / (12 kappa)`.
pub fn compute_tau(h: f64, speed: f64, diffusivity: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter(format!("cell size must be positive, got {h}")));
    }
    if !(diffusivity.is_finite() && diffusivity > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "diffusivity must be positive, got {diffusivity}"
        )));
    }
    if !(speed.is_finite() && speed >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "speed must be non-negative, got {speed}"
        )));
    }
    let peclet = speed * h / (2.0 * diffusivity);
    if peclet < 1e-4 {
        Ok(h * h / (12.0 * diffusivity))
    } else {
        Ok(h / (2.0 * speed) * (1.0 / peclet.tanh() - 1.0 / peclet))
    }
}

struct SplitVelocity {
    b1: Vec<f64>,
    b2: Vec<f64>,
}

fn split_velocity(space: &ProductSpace, velocity: &[f64]) -> Result<SplitVelocity> {
    if velocity.len() != space.dim() {
        return Err(Error::DimensionMismatch(format!(
            "velocity has {} components for a {}D product domain",
            velocity.len(),
            space.dim()
        )));
    }
    if !velocity.iter().all(|b| b.is_finite()) {
        return Err(Error::NonFiniteValue("velocity component".into()));
    }
    let d1 = space.mesh1().dim();
    Ok(SplitVelocity { b1: velocity[..d1].to_vec(), b2: velocity[d1..].to_vec() })
}

/// Assembles the streamline-stabilized advection-diffusion operator.
///
/// The aligned variant requires the velocity to vanish on the first
/// subdomain and assembles the reduced term list; the general variant keeps
/// every term, including the ones that are identically zero for P1 elements.
pub fn assemble_advdiff_supg(problem: &AdvectionDiffusionProblem) -> Result<AssembledProblem> {
    let space = &problem.space;
    let kappa = problem.diffusivity;
    let tau = problem.tau;
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "diffusivity must be positive, got {kappa}"
        )));
    }
    if !(tau.is_finite() && tau >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "stabilization weight must be non-negative, got {tau}"
        )));
    }
    let SplitVelocity { b1, b2 } = split_velocity(space, &problem.velocity)?;

    let forms1 = SubdomainForms::assemble(
        space.mesh1(),
        &[
            FormKind::Mass,
            FormKind::Stiffness,
            FormKind::Advection { velocity: b1.clone() },
            FormKind::AdvectionTranspose { velocity: b1.clone() },
            FormKind::SupgAdvection { velocity: b1.clone() },
            FormKind::LaplacianAdvection { velocity: b1.clone() },
            FormKind::LaplacianMass,
        ],
        &[VectorFormKind::Load, VectorFormKind::SupgLoad { velocity: b1.clone() }],
    )?;
    let forms2 = SubdomainForms::assemble(
        space.mesh2(),
        &[
            FormKind::Mass,
            FormKind::Stiffness,
            FormKind::Advection { velocity: b2.clone() },
            FormKind::AdvectionTranspose { velocity: b2.clone() },
            FormKind::SupgAdvection { velocity: b2.clone() },
            FormKind::LaplacianAdvection { velocity: b2.clone() },
            FormKind::LaplacianMass,
        ],
        &[VectorFormKind::Load, VectorFormKind::SupgLoad { velocity: b2.clone() }],
    )?;

    let mass1 = forms1.matrix(&FormKind::Mass)?;
    let stiffness1 = forms1.matrix(&FormKind::Stiffness)?;
    let mass2 = forms2.matrix(&FormKind::Mass)?;
    let stiffness2 = forms2.matrix(&FormKind::Stiffness)?;
    let advection2 = forms2.matrix(&FormKind::Advection { velocity: b2.clone() })?;
    let advection_t2 = forms2.matrix(&FormKind::AdvectionTranspose { velocity: b2.clone() })?;
    let supg2 = forms2.matrix(&FormKind::SupgAdvection { velocity: b2.clone() })?;
    let lap_adv2 = forms2.matrix(&FormKind::LaplacianAdvection { velocity: b2.clone() })?;
    let lap_mass1 = forms1.matrix(&FormKind::LaplacianMass)?;

    let terms = match problem.variant {
        SupgVariant::Aligned => {
            if b1.iter().any(|&b| b != 0.0) {
                return Err(Error::InvalidParameter(
                    "the aligned variant requires zero velocity on the first subdomain".into(),
                ));
            }
            vec![
                KronTerm::new(kappa, stiffness1.clone(), mass2.clone()),
                KronTerm::new(kappa, mass1.clone(), stiffness2.clone()),
                KronTerm::new(1.0, mass1.clone(), advection2.clone()),
                KronTerm::new(-kappa * tau, lap_mass1.clone(), advection_t2.clone()),
                KronTerm::new(-kappa * tau, mass1.clone(), lap_adv2.clone()),
                KronTerm::new(tau, mass1.clone(), supg2.clone()),
            ]
        }
        SupgVariant::General => {
            let advection1 = forms1.matrix(&FormKind::Advection { velocity: b1.clone() })?;
            let advection_t1 =
                forms1.matrix(&FormKind::AdvectionTranspose { velocity: b1.clone() })?;
            let supg1 = forms1.matrix(&FormKind::SupgAdvection { velocity: b1.clone() })?;
            let lap_adv1 = forms1.matrix(&FormKind::LaplacianAdvection { velocity: b1.clone() })?;
            let lap_mass2 = forms2.matrix(&FormKind::LaplacianMass)?;
            vec![
                KronTerm::new(kappa, stiffness1.clone(), mass2.clone()),
                KronTerm::new(kappa, mass1.clone(), stiffness2.clone()),
                KronTerm::new(1.0, advection1.clone(), mass2.clone()),
                KronTerm::new(1.0, mass1.clone(), advection2.clone()),
                KronTerm::new(-kappa * tau, lap_adv1.clone(), mass2.clone()),
                KronTerm::new(-kappa * tau, lap_mass1.clone(), advection_t2.clone()),
                KronTerm::new(-kappa * tau, advection_t1.clone(), lap_mass2.clone()),
                KronTerm::new(-kappa * tau, mass1.clone(), lap_adv2.clone()),
                KronTerm::new(tau, supg1.clone(), mass2.clone()),
                KronTerm::new(tau, advection1.clone(), advection_t2.clone()),
                KronTerm::new(tau, advection_t1.clone(), advection2.clone()),
                KronTerm::new(tau, mass1.clone(), supg2.clone()),
            ]
        }
    };
    let operator = KronSumOperator::new(terms)?;

    let f_nodal = nodal_forcing(space, &problem.forcing)?;
    let raw_rhs = match problem.rhs_mode {
        RhsMode::LumpedMass => {
            let load1 = forms1.vector(&VectorFormKind::Load)?;
            let load2 = forms2.vector(&VectorFormKind::Load)?;
            let supg_load1 = forms1.vector(&VectorFormKind::SupgLoad { velocity: b1.clone() })?;
            let supg_load2 = forms2.vector(&VectorFormKind::SupgLoad { velocity: b2.clone() })?;
            // f . (F1 x F2) - tau * f . (F1s x F2 + F1 x F2s), where the
            // starred vectors integrate the streamline derivative of the test
            // functions.
            let plain = lumped_rhs(space, &f_nodal, load1, load2);
            let streamline1 = lumped_rhs(space, &f_nodal, supg_load1, load2);
            let streamline2 = lumped_rhs(space, &f_nodal, load1, supg_load2);
            plain
                .iter()
                .zip(streamline1.iter().zip(&streamline2))
                .map(|(p, (s1, s2))| p - tau * (s1 + s2))
                .collect()
        }
        RhsMode::ConsistentMass => {
            let advection_t1 =
                forms1.matrix(&FormKind::AdvectionTranspose { velocity: b1.clone() })?;
            let rhs_op = KronSumOperator::new(vec![
                KronTerm::new(1.0, mass1.clone(), mass2.clone()),
                KronTerm::new(tau, advection_t1.clone(), mass2.clone()),
                KronTerm::new(tau, mass1.clone(), advection_t2.clone()),
            ])?;
            rhs_op.apply(&f_nodal)
        }
    };

    let dofs = constrained_dofs(space, &FaceSelection::full_boundary())?;
    let values = boundary_values(space, &dofs, &problem.dirichlet)?;
    Ok(AssembledProblem { operator, raw_rhs, constrained_dofs: dofs, boundary_values: values })
}
