use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "fermi",
    version,
    about = "Fermi coordinates, metrics, radii and speeds for expanding Robertson-Walker cosmologies"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub model: ModelArgs,

    #[command(flatten)]
    pub numerics: NumericsArgs,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Convert one event between Fermi and Robertson-Walker coordinates.
    Transform(TransformArgs),
    /// Tabulate a quantity over a range of one variable.
    Sweep(SweepArgs),
    /// Run the built-in verification suites and report residuals.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Milne,
    DeSitter,
    PowerLaw,
    Radiation,
    Matter,
    Tabulated,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Scale-factor family.
    #[arg(long, global = true, value_enum)]
    pub model: Option<ModelKind>,

    /// Exponent of a(t) = t^alpha for --model power-law, 0 < alpha <= 1.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,

    /// Hubble constant of --model de-sitter [default: 1].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub h0: Option<f64>,

    /// CSV file with a `t,a` header for --model tabulated (a `.json` file
    /// holding `[[t, a], ...]` is also accepted).
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,

    /// Spatial curvature, 0 or -1 [default: -1 for milne, 0 otherwise].
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k: Option<i32>,
}

#[derive(Debug, Args)]
pub struct NumericsArgs {
    /// Relative tolerance of the adaptive quadrature.
    #[arg(long, global = true)]
    pub quad_rel_tol: Option<f64>,

    /// Absolute tolerance of the adaptive quadrature.
    #[arg(long, global = true)]
    pub quad_abs_tol: Option<f64>,

    /// Tolerance of the root finder.
    #[arg(long, global = true)]
    pub root_tol: Option<f64>,

    /// Iteration cap for root finding and subdivision cap for quadrature
    /// [default: 200, or 16 per sample for tabulated models].
    #[arg(long, global = true)]
    pub max_iter: Option<usize>,

    /// Surrogate upper limit for unbounded sigma ranges.
    #[arg(long, global = true)]
    pub sigma_cap: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, global = true, value_enum, default_value = "csv")]
    pub format: Format,

    /// Write to this file instead of standard output.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    /// Prepend provenance (generator version, arguments, model, numerics).
    #[arg(long, global = true)]
    pub meta: bool,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[command(subcommand)]
    pub direction: Direction,
}

#[derive(Debug, Subcommand)]
pub enum Direction {
    /// Robertson-Walker (t, chi) to Fermi (tau, rho).
    ToFermi {
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        #[arg(long, allow_negative_numbers = true)]
        chi: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
    },
    /// Fermi (tau, rho) to Robertson-Walker (t, chi).
    ToRw {
        #[arg(long, allow_negative_numbers = true)]
        tau: f64,
        #[arg(long, allow_negative_numbers = true)]
        rho: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phi: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    /// Points on the orthogonal geodesic; the variable is sigma.
    Geodesic,
    /// Polar metric components and lambda; the variable is rho.
    Metric,
    /// Fermi and Hubble speeds of comoving particles; the variable is chi0.
    Velocity,
    /// Proper radius of the simultaneity slice; the variable is tau.
    Radius,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub quantity: Quantity,

    /// First value of the swept variable.
    #[arg(long, allow_negative_numbers = true)]
    pub from: f64,

    /// Last value of the swept variable.
    #[arg(long, allow_negative_numbers = true)]
    pub to: f64,

    #[arg(long, default_value_t = 50)]
    pub samples: usize,

    /// Observer proper time (required except for radius sweeps).
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,

    #[arg(long, value_enum, default_value = "linear")]
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    /// Exactly solvable models against their closed forms (ignores --model).
    ClosedForms,
    /// Geodesic ODE integration against the quadrature maps.
    OdeOracle,
    /// Chart, metric and velocity identities.
    Invariants,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum, default_value = "all")]
    pub suite: Suite,
}
