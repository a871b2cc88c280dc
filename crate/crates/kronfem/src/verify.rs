//! Manufactured solutions, error metrics, and convergence studies.
//!
//! Each case pins an exact solution and the forcing that makes it solve the
//! PDE, so discretization error can be measured directly at the nodes. A
//! study solves the case over a ladder of resolutions and reports errors and
//! observed rates per row.

use crate::constraints::DirichletData;
use crate::error::{Error, Result};
use crate::mesh::{interval_mesh, unit_square_mesh, Diagonal};
use crate::problems::{
    assemble_advdiff_supg, assemble_poisson_product, assemble_wave_spacetime, compute_tau,
    AdvectionDiffusionProblem, PoissonProblem, RhsMode, SupgVariant, WaveProblem,
};
use crate::solve::SolveMethod;
use crate::tensor::ProductSpace;

use std::f64::consts::PI;

/// A PDE with a known exact solution on its reference domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ManufacturedCase {
    /// `-lap u = f` on the 4-cube, solved as a product of two unit squares,
    /// with `u` a product of sines.
    Poisson4d,
    /// `u_tt = speed^2 lap u` on the unit square times `[0, 1]`, with a
    /// traveling-wave solution.
    Wave { speed: f64 },
    /// `-diffusivity lap u + (0, velocity) . grad u = f` on the unit square,
    /// with an outflow boundary layer of width `diffusivity / velocity`.
    AdvectionDiffusion { diffusivity: f64, velocity: f64 },
}

impl ManufacturedCase {
    /// Wave case at unit speed.
    pub fn wave() -> Self {
        ManufacturedCase::Wave { speed: 1.0 }
    }

    /// Advection-diffusion case at diffusivity 0.01 and unit vertical
    /// velocity, a layer of width about 0.01.
    pub fn advection_diffusion() -> Self {
        ManufacturedCase::AdvectionDiffusion { diffusivity: 0.01, velocity: 1.0 }
    }

    /// Dimension of the full product domain.
    pub fn domain_dim(&self) -> usize {
        match self {
            ManufacturedCase::Poisson4d => 4,
            ManufacturedCase::Wave { .. } => 3,
            ManufacturedCase::AdvectionDiffusion { .. } => 2,
        }
    }

    /// Exact solution at a product-domain point.
    pub fn exact(&self, x: &[f64]) -> f64 {
        match *self {
            ManufacturedCase::Poisson4d => x.iter().map(|&c| (PI * c).sin()).product(),
            ManufacturedCase::Wave { speed } => {
                let t = x[2];
                (x[0] - speed * t).sin() + (x[1] - speed * t).sin()
            }
            ManufacturedCase::AdvectionDiffusion { diffusivity, velocity } => {
                exact_advdiff(x[0], x[1], diffusivity, velocity)
            }
        }
    }

    /// Forcing that makes [`Self::exact`] solve the PDE.
    pub fn forcing(&self, x: &[f64]) -> f64 {
        match *self {
            ManufacturedCase::Poisson4d => 4.0 * PI * PI * self.exact(x),
            ManufacturedCase::Wave { .. } => 0.0,
            ManufacturedCase::AdvectionDiffusion { diffusivity, velocity } => {
                // u = P(x) Q(y) with P'' = -8 and Q solving the 1D operator,
                // so -kappa lap u + b . grad u = 8 kappa Q + velocity * P.
                let p = 1.0 - 4.0 * (x[0] - 0.5) * (x[0] - 0.5);
                let beta = velocity / diffusivity;
                let q = x[1] + boundary_layer(x[1], beta);
                8.0 * diffusivity * q + velocity * p
            }
        }
    }
}

/// `(e^(beta y) - 1) / (1 - e^beta)`, evaluated without overflow for large
/// positive `beta` by scaling through `e^(-beta)`.
fn boundary_layer(y: f64, beta: f64) -> f64 {
    if beta > 0.0 {
        let em = (-beta).exp();
        -(((y - 1.0) * beta).exp() - em) / (1.0 - em)
    } else {
        ((beta * y).exp() - 1.0) / (1.0 - beta.exp())
    }
}

/// Exact advection-diffusion solution: a parabola across the flow times a
/// linear profile corrected by an outflow boundary layer. Vanishes on the
/// whole boundary of the unit square.
pub fn exact_advdiff(x: f64, y: f64, diffusivity: f64, velocity: f64) -> f64 {
    assert!(
        diffusivity.is_finite() && diffusivity > 0.0,
        "diffusivity must be positive, got {diffusivity}"
    );
    assert!(
        velocity.is_finite() && velocity != 0.0,
        "velocity must be nonzero, got {velocity}"
    );
    let p = 1.0 - 4.0 * (x - 0.5) * (x - 0.5);
    let beta = velocity / diffusivity;
    p * (y + boundary_layer(y, beta))
}

/// Root-mean-square and maximum nodal errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorMetrics {
    pub rmse: f64,
    pub linf: f64,
}

/// Nodal error metrics over all dofs, constrained ones included.
pub fn error_metrics(computed: &[f64], exact: &[f64]) -> Result<ErrorMetrics> {
    if computed.len() != exact.len() {
        return Err(Error::DimensionMismatch(format!(
            "computed has {} entries, exact has {}",
            computed.len(),
            exact.len()
        )));
    }
    if computed.is_empty() {
        return Err(Error::InvalidParameter("error metrics need at least one dof".into()));
    }
    let mut sum_sq = 0.0;
    let mut linf: f64 = 0.0;
    for (c, e) in computed.iter().zip(exact) {
        let diff = c - e;
        sum_sq += diff * diff;
        linf = linf.max(diff.abs());
    }
    Ok(ErrorMetrics { rmse: (sum_sq / computed.len() as f64).sqrt(), linf })
}

/// Observed order: `ln(e_coarse / e_fine) / ln(h_coarse / h_fine)`.
pub fn convergence_rate(error_coarse: f64, error_fine: f64, h_coarse: f64, h_fine: f64) -> f64 {
    (error_coarse / error_fine).ln() / (h_coarse / h_fine).ln()
}

/// One resolution of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub dofs: usize,
    /// Grid spacing on the (first) subdomain.
    pub h: f64,
    /// Time step, for space-time cases.
    pub dt: Option<f64>,
    /// `speed * dt / h`, for space-time cases.
    pub cfl: Option<f64>,
    pub rmse: f64,
    pub linf: f64,
    /// Rate against the previous row; absent on the first row.
    pub rmse_rate: Option<f64>,
    pub linf_rate: Option<f64>,
}

/// Configuration for [`run_study`].
#[derive(Debug, Clone)]
pub struct StudyOptions {
    pub case: ManufacturedCase,
    /// Cells per unit length on each subdomain, strictly increasing.
    pub resolutions: Vec<usize>,
    pub rhs_mode: RhsMode,
    pub method: SolveMethod,
    /// Triangulation pattern for 2D subdomains.
    pub diagonal: Diagonal,
    /// Fixed stabilization weight; `None` computes the optimal value per
    /// resolution.
    pub tau_override: Option<f64>,
}

impl StudyOptions {
    pub fn new(case: ManufacturedCase, resolutions: Vec<usize>) -> Self {
        StudyOptions {
            case,
            resolutions,
            rhs_mode: RhsMode::LumpedMass,
            method: SolveMethod::Direct,
            diagonal: Diagonal::Right,
            tau_override: None,
        }
    }
}

/// Number of time cells pairing with `n` space cells so the time step tracks
/// `4h / 7`.
pub fn wave_time_cells(n: usize) -> usize {
    (7 * n + 2) / 4
}

fn dirichlet_from_case(case: ManufacturedCase) -> DirichletData {
    DirichletData::new(move |x| case.exact(x))
}

/// Solves `case` over the resolution ladder and reports per-row errors and
/// observed rates. Iterative solves are limited to the symmetric
/// positive-definite case.
pub fn run_study(options: &StudyOptions) -> Result<Vec<ConvergenceRow>> {
    if options.resolutions.is_empty() {
        return Err(Error::InvalidParameter("a study needs at least one resolution".into()));
    }
    if options.resolutions.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "resolutions must be strictly increasing".into(),
        ));
    }
    if options.resolutions[0] == 0 {
        return Err(Error::InvalidParameter("resolutions must be positive".into()));
    }
    if options.method == SolveMethod::ConjugateGradient
        && !matches!(options.case, ManufacturedCase::Poisson4d)
    {
        return Err(Error::InvalidParameter(
            "the iterative solver applies only to the symmetric positive-definite case".into(),
        ));
    }

    let case = options.case;
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(options.resolutions.len());
    for &n in &options.resolutions {
        let (space, dt, cfl) = match case {
            ManufacturedCase::Poisson4d => {
                let square = unit_square_mesh(n, n, options.diagonal)?;
                (ProductSpace::new(square.clone(), square), None, None)
            }
            ManufacturedCase::Wave { speed } => {
                let nt = wave_time_cells(n);
                let space = ProductSpace::new(
                    unit_square_mesh(n, n, options.diagonal)?,
                    interval_mesh(nt, 0.0, 1.0)?,
                );
                let dt = 1.0 / nt as f64;
                (space, Some(dt), Some(speed * dt * n as f64))
            }
            ManufacturedCase::AdvectionDiffusion { .. } => {
                let space = ProductSpace::new(
                    interval_mesh(n, 0.0, 1.0)?,
                    interval_mesh(n, 0.0, 1.0)?,
                );
                (space, None, None)
            }
        };
        let h = 1.0 / n as f64;

        let assembled = match case {
            ManufacturedCase::Poisson4d => assemble_poisson_product(&PoissonProblem {
                space: space.clone(),
                rhs_mode: options.rhs_mode,
                forcing: Box::new(move |x| case.forcing(x)),
                dirichlet: dirichlet_from_case(case),
            })?,
            ManufacturedCase::Wave { speed } => assemble_wave_spacetime(&WaveProblem {
                space: space.clone(),
                wave_speed: speed,
                dirichlet: dirichlet_from_case(case),
            })?,
            ManufacturedCase::AdvectionDiffusion { diffusivity, velocity } => {
                let tau = match options.tau_override {
                    Some(t) => t,
                    None => compute_tau(h, velocity.abs(), diffusivity)?,
                };
                assemble_advdiff_supg(&AdvectionDiffusionProblem {
                    space: space.clone(),
                    diffusivity,
                    velocity: vec![0.0, velocity],
                    tau,
                    rhs_mode: options.rhs_mode,
                    variant: SupgVariant::Aligned,
                    forcing: Box::new(move |x| case.forcing(x)),
                    dirichlet: dirichlet_from_case(case),
                })?
            }
        };

        let report = assembled.solve(options.method)?;
        let exact_nodal = space.interpolate(|x| case.exact(x));
        let metrics = error_metrics(&report.solution, &exact_nodal)?;

        let (rmse_rate, linf_rate) = match rows.last() {
            Some(prev) => (
                Some(convergence_rate(prev.rmse, metrics.rmse, prev.h, h)),
                Some(convergence_rate(prev.linf, metrics.linf, prev.h, h)),
            ),
            None => (None, None),
        };
        rows.push(ConvergenceRow {
            dofs: space.n_dofs(),
            h,
            dt,
            cfl,
            rmse: metrics.rmse,
            linf: metrics.linf,
            rmse_rate,
            linf_rate,
        });
    }
    Ok(rows)
}
