//! Command-line front end. `main` is a one-line call to [`run`].
//!
//! Exit codes: 0 success, 1 input error (or a failed validation suite),
//! 2 infeasible deadline.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::scheduler::Policy;

mod commands;
mod files;
mod validate;

pub use files::{load_graph, load_platform, GraphFile, PlatformFile, TaskEntry};
pub use validate::{validate, SuiteSummary, ValidationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "memdvfs", version, about = "Energy-optimal global DVFS for memory-intensive task graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Optimal per-level frequencies under a deadline.
    Optimize(OptimizeArgs),
    /// Compare list-scheduling policies by the scheduling criterion.
    Schedule(ScheduleArgs),
    /// CSV of the optimal ratio f_m / f_1 against memory overload (alpha = 2).
    Sweep(SweepArgs),
    /// Randomized cross-checks of the solver against oracles and bounds.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Platform JSON file.
    #[arg(short, long)]
    pub platform: PathBuf,
    /// Task graph JSON file; its schedule supplies w and d.
    #[arg(short, long, required_unless_present = "w", conflicts_with_all = ["w", "d"])]
    pub graph: Option<PathBuf>,
    /// List-scheduling policy used with --graph.
    #[arg(long, default_value = "critical-path")]
    pub policy: Policy,
    /// Explicit parallelism vector w_1,..,w_M in cycles.
    #[arg(short, long, value_delimiter = ',', requires = "d", allow_hyphen_values = true)]
    pub w: Option<Vec<f64>>,
    /// Data-to-CPU quotient, memory accesses per cycle.
    #[arg(short, long)]
    pub d: Option<f64>,
    /// Deadline in seconds.
    #[arg(short = 't', long = "deadline")]
    pub t_budget: f64,
    /// Drop the static power terms and print the closed-form reference solution alongside.
    #[arg(long)]
    pub dynamic_only: bool,
    /// Upper frequency limit in Hz.
    #[arg(long)]
    pub f_max: Option<f64>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ScheduleArgs {
    /// Platform JSON file.
    #[arg(short, long)]
    pub platform: PathBuf,
    /// Task graph JSON file.
    #[arg(short, long)]
    pub graph: PathBuf,
    /// Deadline in seconds.
    #[arg(short = 't', long = "deadline")]
    pub t_budget: f64,
    /// Comma-separated policies to compare.
    #[arg(long, value_delimiter = ',', default_value = "critical-path,largest-work,fifo")]
    pub policies: Vec<Policy>,
    /// Sort rows by the scheduling criterion.
    #[arg(long)]
    pub rank: bool,
    /// Print the rows as JSON.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Platform JSON file; alpha must be 2.
    #[arg(short, long)]
    pub platform: PathBuf,
    /// Active-core level m.
    #[arg(short)]
    pub m: usize,
    /// Smallest overload g.
    #[arg(long, default_value_t = 0.0)]
    pub g_min: f64,
    /// Largest overload g.
    #[arg(long, default_value_t = 100.0)]
    pub g_max: f64,
    /// Number of evenly spaced g values.
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Write the CSV here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// RNG seed; equal seeds give identical reports.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random instances per suite.
    #[arg(long, default_value_t = 200)]
    pub instances: usize,
}

/// Failure carried to the process boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InfeasibleDeadline { .. } | Error::CapInfeasible { .. } => EXIT_INFEASIBLE,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

/// Parse `args` (including the program name) and execute. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let outcome = match cli.command {
        Command::Optimize(a) => commands::optimize(&a, out),
        Command::Schedule(a) => commands::schedule(&a, out),
        Command::Sweep(a) => commands::sweep(&a, out),
        Command::Validate(a) => validate::run(&a, out),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}
