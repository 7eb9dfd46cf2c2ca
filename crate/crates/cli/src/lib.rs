//! Command-line experiment runner: graph generation, algorithm runs with
//! verification, parameter sweeps and brute-force oracles.
//!
//! Exit codes: 0 success, 2 usage, 3 generation failure, 4 verification
//! failure, 5 declared algorithm failure, 6 enumeration cap exceeded.

mod config;
mod generate;
mod oracle;
mod run;
mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use config::{CONFIG_PREFIX, SEED_ENV};
pub use generate::{GenerateArgs, GenerateConfig};
pub use oracle::{OracleArgs, OracleConfig};
pub use run::{RunArgs, RunConfig};
pub use sweep::{SweepArgs, SweepConfig, SWEEP_HEADER};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("generation failed: {0}")]
    Generation(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("algorithm failed: {0}")]
    Declared(String),
    #[error("{0}")]
    Cap(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Generation(_) => 3,
            CliError::Verification(_) => 4,
            CliError::Declared(_) => 5,
            CliError::Cap(_) => 6,
            CliError::Internal(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "locality-lab", version, about = "LOCAL-model experiments on trees and rings")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated graph in edge-list format.
    Generate(GenerateArgs),
    /// Run one algorithm on a graph file and verify its output.
    Run(RunArgs),
    /// Repeat runs over a parameter axis and emit CSV.
    Sweep(SweepArgs),
    /// Brute-force and numeric checks.
    Oracle(OracleArgs),
}

/// Writes to `path`, or to `out` when no path is given.
pub(crate) fn emit(path: Option<&Path>, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(format!("cannot write output: {e}"))),
    }
}

pub(crate) fn read_graph_file(path: &str) -> Result<locality_lab::graph::Graph, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read graph {path}: {e}")))?;
    locality_lab::graph::read_graph(&text).map_err(|e| CliError::Usage(format!("bad graph file {path}: {e}")))
}

pub(crate) fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(a) => generate::cmd_generate(&a, out),
        Command::Run(a) => run::cmd_run(&a, out),
        Command::Sweep(a) => sweep::cmd_sweep(&a, out),
        Command::Oracle(a) => oracle::cmd_oracle(&a, out),
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code. Results go to `out`, diagnostics to `err`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match cli.jobs {
        Some(0) => Err(CliError::Usage("--jobs must be at least 1".into())),
        Some(j) => match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
            Ok(pool) => {
                // the pool's workers cannot hold `out`; stdout output is buffered
                let mut buf = Vec::new();
                let r = pool.install(|| dispatch(cli, &mut buf));
                let _ = out.write_all(&buf);
                r
            }
            Err(e) => Err(CliError::Internal(format!("thread pool: {e}"))),
        },
        None => dispatch(cli, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
