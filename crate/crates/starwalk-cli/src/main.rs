//! Command-line front end for scattering walks on star graphs and the
//! equivalent multivalued-function oracle search.
//!
//! Exit codes: 0 success, 2 usage error, 3 numerical or I/O failure,
//! 4 refused by `--strict` (instance outside the asymptotic regime).

mod commands;
mod output;
mod phases;
mod svg;

use clap::{Args, Parser, Subcommand, ValueEnum};
use starwalk_core::oracle::OracleMode;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "starwalk",
    version,
    about = "Scattering quantum walks on star graphs and the equivalent oracle search",
    after_help = "Exit codes: 0 success, 2 usage, 3 numerical/io failure, 4 refused by --strict"
)]
pub struct Cli {
    /// Directory for output files; STARWALK_OUT_DIR, then the working
    /// directory, when absent.
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Simulate the walk and trace one class's per-edge probability
    Walk(WalkArgs),
    /// Print the certified analytic spectrum of the walk step operator
    Spectrum(SpectrumArgs),
    /// Run the oracle search on a generated instance and trace it
    Grover(GroverArgs),
    /// Print the closed-form peak prediction for an instance shape
    Predict(PredictArgs),
    /// Run a seeded (N, d, M) sweep and fit the peak-iteration scaling
    Sweep(SweepArgs),
}

#[derive(Args)]
pub struct WalkArgs {
    /// Phase classes as `phase:count,...`; phases are rational multiples of
    /// pi (`2pi/3`, `-pi`, `pi/2`) or decimals
    #[arg(long, value_name = "CLASSES")]
    pub phases: String,

    /// Class to trace, as an index into the --phases list; the smallest
    /// class when absent
    #[arg(long, value_name = "INDEX")]
    pub target: Option<usize>,

    /// Walk steps to record; sized from the slow rotation mode when absent
    #[arg(long, value_name = "STEPS")]
    pub steps: Option<usize>,

    /// Trace file name inside the output directory
    #[arg(long, default_value = "walk_trace.csv", value_name = "FILE")]
    pub trace: PathBuf,

    /// Also render the trace as a minimal SVG line chart
    #[arg(long)]
    pub svg: bool,
}

#[derive(Args)]
pub struct SpectrumArgs {
    /// Phase classes as `phase:count,...` (same grammar as walk)
    #[arg(long, value_name = "CLASSES")]
    pub phases: String,

    /// Small-class indices for the perturbative expansion; every class at
    /// or below a tenth of the total weight when absent
    #[arg(long, value_delimiter = ',', value_name = "INDEX,...")]
    pub small: Option<Vec<usize>>,

    /// Cross-check against a dense eigendecomposition and print the
    /// largest eigenvalue mismatch
    #[arg(long)]
    pub dense_check: bool,
}

#[derive(Args)]
pub struct GroverArgs {
    /// Number of items
    #[arg(short = 'N', long = "N", value_name = "N")]
    pub n: usize,

    /// Size of the function range (d - 1 unmarked values)
    #[arg(short = 'd', long = "d", value_name = "D")]
    pub d: u32,

    /// Number of marked items
    #[arg(short = 'M', long = "M", default_value_t = 1, value_name = "M")]
    pub m: usize,

    /// Oracle realization
    #[arg(long, value_enum, default_value_t = ModeArg::MultiPhase)]
    pub mode: ModeArg,

    /// Require exactly equal counts for the unmarked values
    #[arg(long)]
    pub even: bool,

    /// Instance seed
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Iteration window; twice the predicted peak when absent
    #[arg(long, value_name = "K")]
    pub window: Option<usize>,

    /// Refuse instances outside the asymptotic regime (exit code 4)
    #[arg(long)]
    pub strict: bool,

    /// Trace file name inside the output directory
    #[arg(long, default_value = "grover_trace.csv", value_name = "FILE")]
    pub trace: PathBuf,

    /// Also render the trace as a minimal SVG line chart
    #[arg(long)]
    pub svg: bool,
}

#[derive(Args)]
pub struct PredictArgs {
    /// Number of items
    #[arg(short = 'N', long = "N", value_name = "N")]
    pub n: usize,

    /// Size of the function range
    #[arg(short = 'd', long = "d", value_name = "D")]
    pub d: u32,

    /// Number of marked items
    #[arg(short = 'M', long = "M", default_value_t = 1, value_name = "M")]
    pub m: usize,

    /// Refuse shapes outside the asymptotic regime (exit code 4)
    #[arg(long)]
    pub strict: bool,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Comma-separated item counts
    #[arg(
        short = 'N',
        long = "N",
        value_delimiter = ',',
        required = true,
        value_name = "N,..."
    )]
    pub n: Vec<usize>,

    /// Comma-separated range sizes
    #[arg(
        short = 'd',
        long = "d",
        value_delimiter = ',',
        required = true,
        value_name = "D,..."
    )]
    pub d: Vec<u32>,

    /// Comma-separated marked-set sizes
    #[arg(
        short = 'M',
        long = "M",
        value_delimiter = ',',
        default_value = "1",
        value_name = "M,..."
    )]
    pub m: Vec<usize>,

    /// Oracle realization
    #[arg(long, value_enum, default_value_t = ModeArg::MultiPhase)]
    pub mode: ModeArg,

    /// Require exactly equal counts for the unmarked values in every cell
    #[arg(long)]
    pub even: bool,

    /// Base seed; each cell derives its own seed from this and its key
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Iteration window per cell; sized from each prediction when absent
    #[arg(long, value_name = "K")]
    pub window: Option<usize>,

    /// Record real wall-clock milliseconds; off by default because timing
    /// breaks byte-identical reruns
    #[arg(long)]
    pub timing: bool,

    /// Records file format
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    pub format: FormatArg,

    /// Include regime-warned records in the scaling fit
    #[arg(long)]
    pub include_warned: bool,

    /// Refuse when any grid cell falls outside the asymptotic regime
    #[arg(long)]
    pub strict: bool,

    /// Stem of the records file(s) inside the output directory
    #[arg(long, default_value = "sweep", value_name = "STEM")]
    pub name: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// One query per iteration through the d-valued phase oracle
    MultiPhase,
    /// d queries per iteration through binary sign flips
    SignFlip,
}

impl From<ModeArg> for OracleMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::MultiPhase => OracleMode::MultiPhase,
            ModeArg::SignFlip => OracleMode::SignFlip,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Both,
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 2 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match commands::dispatch(&cli) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("{failure}");
            failure.code()
        }
    }
}
