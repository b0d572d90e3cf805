use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nikolskii::bounds::Method;

use crate::format::Format;

#[derive(Debug, Parser)]
#[command(name = "nikolskii", version, about = "Upper and lower bounds for the sharp Nikolskii constant C(d, p)")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "NIKOLSKII_JOBS", default_value_t = 0)]
    pub jobs: usize,
    /// Absolute quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol_abs: f64,
    /// Relative quadrature tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_rel: f64,
    /// Seed for optimiser jitter and random trials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Every bound for a single (d, p).
    Bounds(BoundsArgs),
    /// Bounds over a grid of p for one or more degrees.
    Sweep(SweepArgs),
    /// Numerical self-checks.
    Verify(VerifyArgs),
    /// Plot-ready curve data.
    Figure(FigureArgs),
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.trim().parse().map_err(|e: nikolskii::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub p: f64,
    /// Comma-separated subset of conjecture, holder, power, kernel, beta,
    /// lower_gamma, lower_opt. Defaults to all but lower_opt.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    pub methods: Option<Vec<Method>>,
    /// Also estimate sup E over the admissible jump sequences.
    #[arg(long)]
    pub sup_e: bool,
    /// Exit 0 even if some methods fail.
    #[arg(long)]
    pub partial: bool,
    /// Print the report as JSON after the table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Degrees, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub d: Vec<usize>,
    #[arg(long, default_value_t = 2.0)]
    pub p_min: f64,
    #[arg(long, default_value_t = 4.0)]
    pub p_max: f64,
    #[arg(long, default_value_t = 0.1)]
    pub p_step: f64,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, required = true)]
    pub methods: Vec<Method>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Exit 0 even if some rows record errors.
    #[arg(long)]
    pub partial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    /// Contour identity on random zero configurations.
    Identity,
    /// Known constraints on optimised zero arguments.
    Constraints,
    /// Quadrature norms against the exact coefficient oracle.
    Oracle,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub kind: VerifyKind,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Degree (constraints only).
    #[arg(long, default_value_t = 4)]
    pub d: usize,
    /// Exponent: p for constraints, an even integer for the oracle.
    #[arg(long)]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    /// Kernel upper-bound ratios for d = 2, 3, 4.
    #[value(name = "up_d234")]
    UpD234,
    /// Optimised lower and kernel upper ratio for d = 4.
    #[value(name = "d4_bounds")]
    D4Bounds,
    /// Optimised zero arguments for d = 6.
    #[value(name = "d6_zeros")]
    D6Zeros,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub name: FigureName,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0.01)]
    pub p_step: f64,
}
