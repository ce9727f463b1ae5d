//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use potentialkit::DoubleLimit;

use crate::CliError;

/// Logarithmic and Riesz energies of measures on R^n.
#[derive(Debug, Parser)]
#[command(name = "potentialkit", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Target accuracy of every limit.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    /// Doublings of the (ε, N) schedule before giving up.
    #[arg(long, global = true, default_value_t = 24)]
    pub max_doublings: u32,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true, env = "POTENTIALKIT_THREADS", default_value_t = 0)]
    pub threads: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Log,
    Riesz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Direct,
    Fourier,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// Partial tail integrals of `|μ̂|²/|ξ|^n` over a grid of radii N.
    Tail,
    /// Radial log-kernel limits over a grid of ratios a.
    Radial,
    /// Riesz self-energy over a grid of exponents α.
    Riesz,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy of a measure, or the mixed energy of two.
    Energy(EnergyArgs),
    /// Check a closed-form Bessel integral identity.
    Identity(IdentityArgs),
    /// Minimize the log energy over probability weights on a node set.
    Equilibrium(EquilibriumArgs),
    /// Tabulate a quantity over a parameter grid.
    Sweep(SweepArgs),
    /// Potential of a measure at given points.
    Potential(PotentialArgs),
}

#[derive(Debug, Args)]
pub struct EnergyArgs {
    /// Measure file (JSON).
    pub measure: PathBuf,
    /// Second measure for the mixed energy `∫ p_μ dν̄`.
    #[arg(long = "with")]
    pub other: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Kind::Log)]
    pub kind: Kind,
    /// Riesz exponent; required with `--kind riesz`.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum, default_value_t = RouteArg::Both)]
    pub route: RouteArg,
}

#[derive(Debug, Args)]
pub struct IdentityArgs {
    /// One of im0, im, j0cos, radial.
    pub name: String,
    /// Ratio parameter (default 1).
    #[arg(long)]
    pub a: Option<f64>,
    /// Dimension for the radial identity (default 2).
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EquilibriumArgs {
    /// Node file in the measure format; weights are ignored.
    pub nodes: Option<PathBuf>,
    /// Use this many Chebyshev nodes on [-1, 1] instead of a file.
    #[arg(long, conflicts_with = "nodes")]
    pub chebyshev: Option<usize>,
    #[arg(long, default_value_t = 20_000)]
    pub max_iters: usize,
    /// Also write the weights as CSV here.
    #[arg(long)]
    pub weights: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub kind: SweepKind,
    /// Measure file; required for `tail` and `riesz`.
    pub measure: Option<PathBuf>,
    /// Increasing parameter values, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub grid: Vec<f64>,
    /// Dimension for the radial sweep.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Route for the Riesz sweep.
    #[arg(long, value_enum, default_value_t = RouteArg::Fourier)]
    pub route: RouteArg,
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    /// Measure file (JSON).
    pub measure: PathBuf,
    /// Evaluation point, comma separated; repeat for several points.
    #[arg(long = "at", value_delimiter = ',', num_args = 1.., action = clap::ArgAction::Append, required = true)]
    pub at: Vec<f64>,
    #[arg(long, value_enum, default_value_t = Kind::Log)]
    pub kind: Kind,
    #[arg(long)]
    pub alpha: Option<f64>,
}

/// Validated settings shared by every command.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub tol: f64,
    pub schedule: DoubleLimit,
    pub threads: usize,
    pub format: Format,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self, CliError> {
        if !(g.tol > 0.0 && g.tol.is_finite()) {
            return Err(CliError::input(format!("--tol must be positive, got {}", g.tol)));
        }
        if g.max_doublings < 1 {
            return Err(CliError::input("--max-doublings must be at least 1"));
        }
        let schedule = DoubleLimit::with_max_doublings(g.max_doublings).map_err(CliError::from)?;
        Ok(RunConfig {
            tol: g.tol,
            schedule,
            threads: g.threads,
            format: g.format,
        })
    }
}
