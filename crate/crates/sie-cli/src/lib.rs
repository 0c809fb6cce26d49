//! Command-line front end: parses the JSON run configuration, executes
//! solves, convergence studies, approximation demos, operator checks, and
//! jump detection, and writes CSV/JSON reports.
//!
//! Exit codes: 0 success, 2 configuration, 3 solvability, 4 assembly or
//! numerics, 5 tolerance breach.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub mod commands;
pub mod config;
pub mod output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_SOLVABILITY: i32 = 3;
pub const EXIT_NUMERICS: i32 = 4;
pub const EXIT_TOLERANCE: i32 = 5;

/// CLI error carrying the stable code string and the exit code.
#[derive(Debug, Clone)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub exit: i32,
}

impl CliError {
    pub fn config(message: String) -> Self {
        CliError { code: "config-error".into(), message, exit: EXIT_CONFIG }
    }

    pub fn numerics(message: String) -> Self {
        CliError { code: "numerics-error".into(), message, exit: EXIT_NUMERICS }
    }

    pub fn tolerance(message: String) -> Self {
        CliError { code: "tolerance-breach".into(), message, exit: EXIT_TOLERANCE }
    }

    /// Core errors surfaced while interpreting the configuration map to the
    /// configuration exit code but keep their own code string.
    pub fn from_config_stage(err: sie_core::Error) -> Self {
        CliError { code: err.code().into(), message: err.to_string(), exit: EXIT_CONFIG }
    }

    /// Core errors surfaced while solving map onto the solvability or
    /// numerics exit codes.
    pub fn from_solve_stage(err: sie_core::Error) -> Self {
        let exit = match &err {
            sie_core::Error::SingularSymbol(_) | sie_core::Error::NonzeroWinding(_) => {
                EXIT_SOLVABILITY
            }
            _ => EXIT_NUMERICS,
        };
        CliError { code: err.code().into(), message: err.to_string(), exit }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "sie",
    about = "Collocation solver for Cauchy singular integral equations with piecewise Holder data",
    long_about = None,
    after_help = "Exit codes: 0 success, 2 configuration, 3 solvability, 4 assembly/numerics, 5 tolerance breach.\nEvery nonzero exit prints a JSON error object {\"error\":{\"code\",\"message\"}} on stdout."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one problem and write coefficients, reconstruction, and reports
    Solve {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides the config's output.directory)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads for assembly and ladder runs
        #[arg(long)]
        jobs: Option<usize>,
        /// Also write the assembled matrix as CSV (row, col, re, im)
        #[arg(long)]
        dump_matrix: bool,
        /// Skip the solvability gate
        #[arg(long)]
        override_solvability: bool,
    },
    /// Run a convergence ladder against a reference solution
    Study {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Direct approximation rates: decompose, interpolate, measure errors
    Approx {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Oracle-comparison tables for the singular and regular operators
    OpsCheck {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Detect jump locations and sizes in sampled data
    Detect {
        /// CSV with columns theta,re,im
        #[arg(long)]
        samples: PathBuf,
        /// Relative first-difference threshold (> 1)
        #[arg(long)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn init_jobs(jobs: Option<usize>) {
    if let Some(n) = jobs {
        // ignore failure: the pool may already exist in-process (tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

/// Runs a parsed command, returning the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Solve { config, out, jobs, dump_matrix, override_solvability } => {
            init_jobs(jobs);
            commands::solve::run(&config, out, dump_matrix, override_solvability)
        }
        Command::Study { config, out, jobs } => {
            init_jobs(jobs);
            commands::study::run(&config, out)
        }
        Command::Approx { config, out, jobs } => {
            init_jobs(jobs);
            commands::approx::run(&config, out)
        }
        Command::OpsCheck { config, out, jobs } => {
            init_jobs(jobs);
            commands::ops_check::run(&config, out)
        }
        Command::Detect { samples, threshold, out } => {
            commands::detect::run(&samples, threshold, out)
        }
    };
    match result {
        Ok(()) => EXIT_OK,
        Err((err, out_dir)) => {
            output::emit_error(&err, out_dir.as_deref());
            err.exit
        }
    }
}

/// Command result type: errors carry the output directory when one was
/// already resolved, so the error object can be mirrored there.
pub type CmdResult = Result<(), (CliError, Option<PathBuf>)>;
