//! `relevation` binary: simulate repair processes, compare them in
//! stochastic orders, classify ageing behaviour and tabulate the built-in
//! demonstration figures.
//!
//! Every subcommand that simulates takes an explicit `--seed`; there is no
//! wall-clock fallback, so a run is always reproducible from its command
//! line. Replications are keyed individually by `(seed, replication)`,
//! which makes the emitted tables byte-identical no matter how many worker
//! threads the simulation engine uses (`RAYON_NUM_THREADS` controls that,
//! and nothing else).

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod classify;
mod compare;
mod config;
mod emit;
mod figure;
mod simulate;
mod svg;
mod transform;

#[derive(Parser)]
#[command(
    name = "relevation",
    version,
    about = "Simulate and compare failure-time processes under relevation and replacement repair"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate arrival paths of one process; write a path table and
    /// optional per-arrival empirical survival curves
    Simulate(SimulateArgs),
    /// Compare two processes: per-arrival stochastic-order verdicts,
    /// counting verdicts at chosen times, optional coupling certificate
    Compare(CompareArgs),
    /// Emit a built-in demonstration figure as a plot-ready table
    Figure(FigureArgs),
    /// Classify a lifetime distribution: IFR/DFR and NBU/NWU with witnesses
    Ageing(AgeingArgs),
    /// Tabulate one-step relevation survival next to the two-unit
    /// replacement survival for a pair of distributions
    RelevationCurve(CurveArgs),
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Process kind: renewal, relevation, minimal-repair, yule or
    /// age-replacement
    #[arg(long)]
    pub process: String,
    /// Distribution such as `gamma:shape=2,scale=1`; repeat the flag to
    /// list one entry per arrival
    #[arg(long = "dist")]
    pub dists: Vec<String>,
    /// JSON sequence file `{"entries": [...], "extend": "repeat_last"}`,
    /// an alternative to --dist
    #[arg(long, conflicts_with = "dists")]
    pub seq_file: Option<PathBuf>,
    /// How a --dist list extends past its end: repeat-last, cycle or finite
    #[arg(long)]
    pub extend: Option<String>,
    /// Arrival-rate offset for the yule process (default 1)
    #[arg(long)]
    pub offset: Option<f64>,
    /// Replacement age K for the age-replacement process
    #[arg(long)]
    pub interval: Option<f64>,
    /// Arrivals per path
    #[arg(long)]
    pub n: usize,
    /// Monte Carlo replications
    #[arg(long)]
    pub reps: u64,
    /// Master seed; mandatory so every run is reproducible
    #[arg(long)]
    pub seed: u64,
    /// Confidence parameter of the DKW bands
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Points in the empirical curve grid
    #[arg(long, default_value_t = 64)]
    pub grid_points: usize,
    /// Upper end of the curve grid; defaults to the largest simulated
    /// arrival time
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Path table destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Empirical curve table destination; curves are skipped when omitted
    #[arg(long)]
    pub curves_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Process kind on the A side of every verdict
    #[arg(long)]
    pub process_a: String,
    /// Process kind on the B side
    #[arg(long)]
    pub process_b: String,
    /// Distribution entries shared by both sides
    #[arg(long = "dist")]
    pub dists: Vec<String>,
    /// Entries for the A side only, overriding --dist
    #[arg(long = "dist-a")]
    pub dists_a: Vec<String>,
    /// Entries for the B side only, overriding --dist
    #[arg(long = "dist-b")]
    pub dists_b: Vec<String>,
    /// Shared JSON sequence file, an alternative to --dist
    #[arg(long, conflicts_with = "dists")]
    pub seq_file: Option<PathBuf>,
    /// Extension rule for --dist lists: repeat-last, cycle or finite
    #[arg(long)]
    pub extend: Option<String>,
    /// Arrival-rate offset for a yule side
    #[arg(long)]
    pub offset: Option<f64>,
    /// Replacement age K for an age-replacement side
    #[arg(long)]
    pub interval: Option<f64>,
    /// Arrivals compared per path
    #[arg(long)]
    pub n: usize,
    /// Monte Carlo replications per side
    #[arg(long)]
    pub reps: u64,
    /// Master seed; the B ensemble runs on seed + 1
    #[arg(long)]
    pub seed: u64,
    /// Confidence parameter of the DKW bands
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Points in the comparison grid
    #[arg(long, default_value_t = 64)]
    pub grid_points: usize,
    /// Upper end of the comparison grid; defaults to the largest simulated
    /// arrival time across both sides
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Comma separated times at which the counting processes are compared
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<f64>,
    /// Also run the shared-uniform pathwise coupling certificate; needs one
    /// renewal and one relevation side
    #[arg(long)]
    pub couple: bool,
    /// Exit with status 4 when any verdict is inconclusive
    #[arg(long)]
    pub strict: bool,
    /// Verdict JSON destination; stdout when omitted
    #[arg(long)]
    pub json_out: Option<PathBuf>,
    /// Empirical curve table covering both processes
    #[arg(long)]
    pub curves_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FigureArgs {
    /// Figure name: `cox` (relevation vs replacement-sum survival under the
    /// non-monotone law) or `age` (minimal repair vs age replacement)
    pub name: String,
    /// Grid points; cox defaults to 512 uniform points, age to 64 log points
    #[arg(long)]
    pub points: Option<usize>,
    /// Replications for the age figure
    #[arg(long, default_value_t = 100_000)]
    pub reps: u64,
    /// Master seed; the age figure simulates and requires it
    #[arg(long)]
    pub seed: Option<u64>,
    /// Confidence parameter of the DKW bands in the age figure
    #[arg(long, default_value_t = 0.01)]
    pub delta: f64,
    /// Table destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional chart of the same table; never changes the table bytes
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Args)]
pub struct AgeingArgs {
    /// Distribution to classify
    #[arg(long)]
    pub dist: String,
    /// Report destination; stdout when omitted
    #[arg(long)]
    pub json_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CurveArgs {
    /// Distribution of the unit in place at time zero
    #[arg(long)]
    pub first: String,
    /// Distribution the repair unit is drawn from
    #[arg(long)]
    pub second: String,
    /// Uniform grid points on (0, t-max]
    #[arg(long, default_value_t = 256)]
    pub points: usize,
    /// Upper end of the grid; defaults to the sum of both 0.995 quantiles
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Table destination; stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional chart of the same table
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

/// Errors carried to the exit-code boundary. Configuration mistakes leave
/// with status 2, numeric failures with 3, and a `--strict` run that could
/// not certify a verdict with 4.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Core(relevation::Error),
    Io(std::io::Error),
    Inconclusive(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Core(e) => match e {
                relevation::Error::Numeric(_) | relevation::Error::Singularity { .. } => 3,
                _ => 2,
            },
            CliError::Inconclusive(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "{msg}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Inconclusive(msg) => write!(f, "inconclusive: {msg}"),
        }
    }
}

impl From<relevation::Error> for CliError {
    fn from(e: relevation::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate(args) => simulate::run(&args),
        Command::Compare(args) => compare::run(&args),
        Command::Figure(args) => figure::run(&args),
        Command::Ageing(args) => classify::run(&args),
        Command::RelevationCurve(args) => transform::run(&args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
