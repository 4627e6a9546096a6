//! Command-line front end: argument parsing, configuration merging and the
//! subcommands that write spectra, ground states, Fisher-information curves,
//! protocol scans and anti-crossings as CSV or JSON.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::json;

use config::{Command, RunConfig};

/// Environment variable capping the worker-thread count.
pub const THREADS_ENV: &str = "ROTOMETRY_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "numerical",
        }
    }

    /// Single-line JSON for standard error.
    pub fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
        .to_string()
    }
}

impl From<rotometry::Error> for CliError {
    fn from(e: rotometry::Error) -> Self {
        if e.is_config() {
            CliError::Config(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "rotometry",
    version,
    about = "Exact diagonalization of rotating Bose gases and their use as phase probes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Lowest energy levels over a grid of the rotation control.
    Spectrum(Invocation),
    /// Ground state at one control value, with sector and orbital diagnostics.
    Groundstate(Invocation),
    /// Quantum Fisher information of probe states against particle loss.
    Qfi(Invocation),
    /// Ramp, hold and readout of the rotation-sensing protocol.
    Protocol(Invocation),
    /// Minimum of the lowest gap inside a bracket.
    Anticrossing(Invocation),
}

#[derive(Debug, clap::Args)]
pub struct Invocation {
    /// JSON file of parameters; flags given on the command line win.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub params: RunConfig,
}

impl Sub {
    pub fn split(self) -> (Command, Invocation) {
        match self {
            Sub::Spectrum(i) => (Command::Spectrum, i),
            Sub::Groundstate(i) => (Command::Groundstate, i),
            Sub::Qfi(i) => (Command::Qfi, i),
            Sub::Protocol(i) => (Command::Protocol, i),
            Sub::Anticrossing(i) => (Command::Anticrossing, i),
        }
    }
}

/// Merged and defaulted configuration of one invocation.
pub fn resolve(command: Command, inv: Invocation) -> Result<RunConfig, CliError> {
    let base = match &inv.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                CliError::config(format!("cannot read config {}: {e}", path.display()))
            })?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    base.overlay(inv.params).resolve(command)
}

/// Sizes the global worker pool from [`THREADS_ENV`].
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            CliError::config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}"))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(format!("cannot size thread pool: {e}")))
}

/// Runs one parsed invocation and writes its artifact.
pub fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (command, inv) = cli.command.split();
    let config = resolve(command, inv)?;
    let text = commands::execute(command, &config)?;
    match &config.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::config(format!("cannot write output: {e}")))
        }
    }
}
