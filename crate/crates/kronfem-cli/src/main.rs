//! Command-line runner for manufactured-solution convergence studies.
//!
//! Configures one of the built-in cases, runs it over a resolution ladder,
//! and emits the error table as CSV. Without `--out` the CSV goes to
//! standard output; with `--out` it is written to that file and a
//! human-readable table is printed instead. Runs are fully deterministic:
//! identical configurations produce byte-identical CSV.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use kronfem::{
    run_study, ConvergenceRow, Diagonal, Error as FemError, ManufacturedCase, RhsMode,
    SolveMethod, StudyOptions,
};

const EXIT_CONFIG: u8 = 1;
const EXIT_SOLVER: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    /// Poisson problem on the product of two unit squares (4D domain)
    Poisson4d,
    /// Space-time wave equation on the unit square times (0, 1)
    Wave,
    /// Stabilized advection-diffusion on the unit square
    Advdiff,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SolverArg {
    /// Sparse LU factorization of the constrained system
    Direct,
    /// Conjugate gradients (symmetric positive-definite cases only)
    Cg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RhsModeArg {
    /// Sample the forcing at nodes and weight by lumped subdomain masses
    LumpedMass,
    /// Project the nodal forcing through the consistent mass matrix
    ConsistentMass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DiagonalArg {
    /// Split squares from lower-left to upper-right
    Right,
    /// Split squares from lower-right to upper-left
    Left,
    /// Both diagonals, with a center node per square
    Crossed,
}

/// Convergence studies for tensor-product finite elements.
///
/// Each case solves a problem with a known exact solution over a ladder of
/// mesh resolutions and reports nodal RMSE and maximum errors per row,
/// with observed convergence rates against the previous row.
#[derive(Parser, Debug)]
#[command(name = "kronfem", version, after_help = "\
Resolutions count cells per unit length on each subdomain axis; the wave \
case derives its time step from the spatial resolution so the CFL number \
stays near 0.57. Exit codes: 0 success, 1 invalid configuration, 2 solver \
failure, 3 I/O failure.")]
struct Cli {
    /// Case to run (required here or in the config file)
    #[arg(long, value_enum)]
    case: Option<CaseArg>,

    /// Comma-separated cells per unit length, strictly increasing
    #[arg(long, value_delimiter = ',', value_name = "N,N,...")]
    resolutions: Option<Vec<usize>>,

    /// Linear solver [default: direct]
    #[arg(long, value_enum)]
    solver: Option<SolverArg>,

    /// Right-hand-side discretization [default: lumped-mass]
    #[arg(long, value_enum)]
    rhs_mode: Option<RhsModeArg>,

    /// Fixed stabilization weight for advdiff [default: optimal per resolution]
    #[arg(long)]
    tau: Option<f64>,

    /// Triangulation pattern for square subdomains [default: right]
    #[arg(long, value_enum)]
    diagonal: Option<DiagonalArg>,

    /// Write the CSV here and print a readable table instead [default: CSV to stdout]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Key-value config file (`key = value` lines, `#` comments); flags override it
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
}

#[derive(Debug)]
struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError { code: EXIT_CONFIG, message: message.into() }
    }

    fn io(message: impl Into<String>) -> Self {
        CliError { code: EXIT_IO, message: message.into() }
    }
}

/// Configuration errors come from user input; everything numerical that
/// goes wrong after validation counts as a solver failure.
fn exit_code_for(error: &FemError) -> u8 {
    match error {
        FemError::InvalidMesh(_)
        | FemError::DimensionMismatch(_)
        | FemError::OutOfRange(_)
        | FemError::InvalidParameter(_)
        | FemError::UnsupportedForm(_) => EXIT_CONFIG,
        FemError::NonFiniteValue(_)
        | FemError::SingularSystem(_)
        | FemError::NonConvergence { .. }
        | FemError::NotPositiveDefinite { .. }
        | FemError::ResidualAboveTolerance { .. } => EXIT_SOLVER,
    }
}

#[derive(Default)]
struct FileConfig {
    case: Option<CaseArg>,
    resolutions: Option<Vec<usize>>,
    solver: Option<SolverArg>,
    rhs_mode: Option<RhsModeArg>,
    tau: Option<f64>,
    diagonal: Option<DiagonalArg>,
    out: Option<PathBuf>,
}

fn parse_enum_value<T: ValueEnum>(key: &str, value: &str) -> Result<T, CliError> {
    T::from_str(value, false).map_err(|_| {
        let allowed: Vec<String> = T::value_variants()
            .iter()
            .filter_map(|v| v.to_possible_value())
            .map(|p| p.get_name().to_string())
            .collect();
        CliError::config(format!(
            "invalid value `{value}` for `{key}` (expected one of: {})",
            allowed.join(", ")
        ))
    })
}

fn parse_resolutions(value: &str) -> Result<Vec<usize>, CliError> {
    value
        .split(',')
        .map(|part| {
            part.trim().parse::<usize>().map_err(|_| {
                CliError::config(format!(
                    "invalid value `{}` in `resolutions` (expected a positive integer)",
                    part.trim()
                ))
            })
        })
        .collect()
}

fn parse_config_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read config file {}: {e}", path.display())))?;
    let mut config = FileConfig::default();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::config(format!(
                "config file {}, line {}: expected `key = value`, got `{line}`",
                path.display(),
                index + 1
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "case" => config.case = Some(parse_enum_value(key, value)?),
            "resolutions" => config.resolutions = Some(parse_resolutions(value)?),
            "solver" => config.solver = Some(parse_enum_value(key, value)?),
            "rhs-mode" => config.rhs_mode = Some(parse_enum_value(key, value)?),
            "tau" => {
                config.tau = Some(value.parse::<f64>().map_err(|_| {
                    CliError::config(format!("invalid value `{value}` for `tau` (expected a real number)"))
                })?)
            }
            "diagonal" => config.diagonal = Some(parse_enum_value(key, value)?),
            "out" => config.out = Some(PathBuf::from(value)),
            _ => {
                return Err(CliError::config(format!(
                    "config file {}, line {}: unknown key `{key}`",
                    path.display(),
                    index + 1
                )))
            }
        }
    }
    Ok(config)
}

#[derive(Debug)]
struct ResolvedConfig {
    case: CaseArg,
    resolutions: Vec<usize>,
    solver: SolverArg,
    rhs_mode: RhsModeArg,
    tau: Option<f64>,
    diagonal: DiagonalArg,
    out: Option<PathBuf>,
}

/// Command-line flags override config-file entries; built-in defaults fill
/// whatever remains. `case` and `resolutions` have no defaults.
fn resolve(cli: Cli) -> Result<ResolvedConfig, CliError> {
    let file = match &cli.config {
        Some(path) => parse_config_file(path)?,
        None => FileConfig::default(),
    };
    let case = cli.case.or(file.case).ok_or_else(|| {
        CliError::config("missing `case`: pass --case or set `case = ...` in the config file")
    })?;
    let resolutions = cli.resolutions.or(file.resolutions).ok_or_else(|| {
        CliError::config(
            "missing `resolutions`: pass --resolutions or set `resolutions = ...` in the config file",
        )
    })?;
    let tau = cli.tau.or(file.tau);
    if tau.is_some() && case != CaseArg::Advdiff {
        return Err(CliError::config("`tau` applies only to the advdiff case"));
    }
    let diagonal = cli.diagonal.or(file.diagonal);
    if diagonal.is_some() && case == CaseArg::Advdiff {
        return Err(CliError::config(
            "`diagonal` applies only to cases with square subdomains (poisson4d, wave)",
        ));
    }
    Ok(ResolvedConfig {
        case,
        resolutions,
        solver: cli.solver.or(file.solver).unwrap_or(SolverArg::Direct),
        rhs_mode: cli.rhs_mode.or(file.rhs_mode).unwrap_or(RhsModeArg::LumpedMass),
        tau,
        diagonal: diagonal.unwrap_or(DiagonalArg::Right),
        out: cli.out.or(file.out),
    })
}

fn study_options(config: &ResolvedConfig) -> StudyOptions {
    let case = match config.case {
        CaseArg::Poisson4d => ManufacturedCase::Poisson4d,
        CaseArg::Wave => ManufacturedCase::wave(),
        CaseArg::Advdiff => ManufacturedCase::advection_diffusion(),
    };
    let mut options = StudyOptions::new(case, config.resolutions.clone());
    options.method = match config.solver {
        SolverArg::Direct => SolveMethod::Direct,
        SolverArg::Cg => SolveMethod::ConjugateGradient,
    };
    options.rhs_mode = match config.rhs_mode {
        RhsModeArg::LumpedMass => RhsMode::LumpedMass,
        RhsModeArg::ConsistentMass => RhsMode::ConsistentMass,
    };
    options.diagonal = match config.diagonal {
        DiagonalArg::Right => Diagonal::Right,
        DiagonalArg::Left => Diagonal::Left,
        DiagonalArg::Crossed => Diagonal::Crossed,
    };
    options.tau_override = config.tau;
    options
}

fn format_optional(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.6e}")).unwrap_or_default()
}

fn render_csv(rows: &[ConvergenceRow]) -> String {
    let mut csv = String::from("dofs,h,dt,cfl,linf,rmse,rmse_rate,linf_rate\n");
    for row in rows {
        let _ = writeln!(
            csv,
            "{},{:.6e},{},{},{:.6e},{:.6e},{},{}",
            row.dofs,
            row.h,
            format_optional(row.dt),
            format_optional(row.cfl),
            row.linf,
            row.rmse,
            format_optional(row.rmse_rate),
            format_optional(row.linf_rate),
        );
    }
    csv
}

fn render_table(rows: &[ConvergenceRow]) -> String {
    let cell = |value: Option<f64>, formatted: fn(f64) -> String| match value {
        Some(v) => formatted(v),
        None => "-".to_string(),
    };
    let mut table = format!(
        "{:>8} {:>8} {:>8} {:>6} {:>12} {:>12} {:>9} {:>9}\n",
        "dofs", "h", "dt", "cfl", "linf", "rmse", "rmse_rate", "linf_rate"
    );
    for row in rows {
        let _ = writeln!(
            table,
            "{:>8} {:>8.4} {:>8} {:>6} {:>12.4e} {:>12.4e} {:>9} {:>9}",
            row.dofs,
            row.h,
            cell(row.dt, |v| format!("{v:.4}")),
            cell(row.cfl, |v| format!("{v:.3}")),
            row.linf,
            row.rmse,
            cell(row.rmse_rate, |v| format!("{v:.2}")),
            cell(row.linf_rate, |v| format!("{v:.2}")),
        );
    }
    table
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let config = resolve(cli)?;
    let options = study_options(&config);
    let rows = run_study(&options)
        .map_err(|e| CliError { code: exit_code_for(&e), message: e.to_string() })?;
    let csv = render_csv(&rows);
    match &config.out {
        Some(path) => {
            fs::write(path, &csv)
                .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
            print!("{}", render_table(&rows));
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    // Clap's own usage errors exit with status 2 by convention, but here 2
    // means a solver failure, so parse errors are remapped to 1.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_CONFIG,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
