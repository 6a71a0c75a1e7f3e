use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hill", version, about = "Spectral analysis of Hill operators with complex periodic potentials")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

/// Options shared by every subcommand. Unset values fall back to the
/// config file, then to the built-in defaults.
#[derive(Debug, Args, Default)]
pub struct Common {
    /// Potential: JSON text, a path to a JSON file, `model:K=<re>[+<im>i]` or `mathieu:q=<q>`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub potential: Option<String>,
    /// Accuracy target in [1e-13, 1e-6]
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Worker threads (also HILL_THREADS)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// JSON config file with defaults for these options
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// `csv`, `json`, or a file path ending in .csv or .json
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Evaluation route for spectral targets
    #[arg(long, global = true, value_enum)]
    pub route: Option<RouteArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RouteArg {
    Auto,
    Ode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Dirichlet,
    Neumann,
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceKindArg {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Localization,
    Symmetry,
    Multiplicity,
    Signs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fundamental system, monodromy and discriminant
    Floquet {
        #[command(subcommand)]
        action: FloquetAction,
    },
    /// Dirichlet, Neumann or periodic eigenvalues
    Eig(EigArgs),
    /// Arcs of the periodic spectrum inside a region
    Bands(BandsArgs),
    /// Partial sums of the trace formulas
    Trace(TraceArgs),
    /// Structural checks for V = K e^{2ix}
    Verify(VerifyArgs),
    /// Special functions
    Specfun {
        #[command(subcommand)]
        action: SpecfunAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum FloquetAction {
    Eval(FloquetEvalArgs),
}

#[derive(Debug, Args)]
pub struct FloquetEvalArgs {
    #[arg(long = "lambda-re", allow_hyphen_values = true)]
    pub lambda_re: f64,
    #[arg(long = "lambda-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub lambda_im: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
}

#[derive(Debug, Args)]
pub struct EigArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub x0: f64,
    /// Number of eigenvalues, counted with multiplicity
    #[arg(long)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct BandsArgs {
    /// re_min,re_max,im_min,im_max
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub region: Vec<f64>,
    /// Arclength step of the tracer
    #[arg(long)]
    pub step: f64,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long, value_enum)]
    pub kind: TraceKindArg,
    /// Single evaluation point
    #[arg(long, allow_hyphen_values = true, conflicts_with = "grid", required_unless_present = "grid")]
    pub x: Option<f64>,
    /// Evaluate at x = iπ/n, i = 0..n-1
    #[arg(long)]
    pub grid: Option<usize>,
    /// Number of terms M
    #[arg(long)]
    pub terms: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Real part of K
    #[arg(long = "K", alias = "k", allow_hyphen_values = true)]
    pub k: f64,
    /// Imaginary part of K (symmetry and multiplicity suites)
    #[arg(long = "K-im", alias = "k-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub k_im: f64,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum SpecfunAction {
    /// J_ν(u), J′_ν(u) and Y_ν(u)
    Eval(SpecfunEvalArgs),
}

#[derive(Debug, Args)]
pub struct SpecfunEvalArgs {
    #[arg(long = "nu-re", allow_hyphen_values = true)]
    pub nu_re: f64,
    #[arg(long = "nu-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub nu_im: f64,
    #[arg(long = "u-re", allow_hyphen_values = true)]
    pub u_re: f64,
    #[arg(long = "u-im", default_value_t = 0.0, allow_hyphen_values = true)]
    pub u_im: f64,
}
