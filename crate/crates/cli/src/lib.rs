//! `percorr` command line: predictions, Monte Carlo runs, verification and
//! export.

pub mod commands;
pub mod config;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use config::RunConfig;

/// Exit status for a completed run whose verification failed.
pub const EXIT_FAILED: u8 = 1;
/// Exit status for usage, data and environment errors.
pub const EXIT_ERROR: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] percorr::Error),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub(crate) fn io(context: impl Into<String>) -> impl FnOnce(std::io::Error) -> CliError {
        let context = context.into();
        move |source| CliError::Io { context, source }
    }
}

#[derive(Debug, Parser)]
#[command(name = "percorr", version, about = "Critical percolation correlation laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the exact half-plane correlators at one geometry.
    Predict(PredictArgs),
    /// Run the Monte Carlo and write checkpoint, estimates and manifest.
    Simulate(RunArgs),
    /// Compare masked ratio averages with the universal constants.
    Verify(CheckpointArgs),
    /// Write ratio maps and column profiles as CSV.
    Export(ExportArgs),
}

#[derive(Debug, Args)]
pub struct PredictArgs {
    /// First anchor on the real line.
    #[arg(long, allow_hyphen_values = true)]
    pub x1: Option<f64>,
    /// Second anchor, greater than x1.
    #[arg(long, allow_hyphen_values = true)]
    pub x2: Option<f64>,
    /// Bulk point in the upper half plane, e.g. "0+1i".
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Print the universal constants C1..C4.
    #[arg(long)]
    pub constants: bool,
}

/// Options shared by every run-related subcommand; they override the
/// config file.
#[derive(Debug, Args, Default)]
pub struct RunArgs {
    /// Flat `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub batches: Option<usize>,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub mask_radius: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// full-perimeter or bottom-edge.
    #[arg(long)]
    pub boundary_mode: Option<String>,
}

#[derive(Debug, Args)]
pub struct CheckpointArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Checkpoint to read; defaults to `<out>/checkpoint.bin`.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub source: CheckpointArgs,
    /// Profile columns; defaults to the first anchor column and the centre column.
    #[arg(long, value_delimiter = ',')]
    pub columns: Vec<usize>,
}

impl RunArgs {
    /// Layered configuration: defaults, environment, file, flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::from_env()?;
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if let Some(v) = self.batches {
            cfg.batches = v;
        }
        if let Some(v) = self.threads {
            cfg.threads = Some(v);
        }
        if let Some(v) = self.mask_radius {
            cfg.mask_radius = v;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
        if let Some(v) = &self.boundary_mode {
            cfg.boundary_mode = v.parse()?;
        }
        Ok(cfg)
    }
}

/// Outcome of a subcommand that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    /// Verification ran but at least one ratio failed.
    Failed,
}

pub fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Predict(a) => commands::predict(a),
        Command::Simulate(a) => commands::simulate(&a.resolve()?),
        Command::Verify(a) => commands::verify(&a.run.resolve()?, a.checkpoint.as_deref()),
        Command::Export(a) => {
            commands::export(&a.source.run.resolve()?, a.source.checkpoint.as_deref(), &a.columns)
        }
    }
}

/// Parse arguments, run, and map the result to an exit status.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_ERROR) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(EXIT_FAILED),
        Err(e) => {
            eprintln!("percorr: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
