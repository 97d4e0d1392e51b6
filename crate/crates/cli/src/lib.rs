//! Library side of the `helicoid` command: argument types, run
//! configuration and the command implementations.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod args;
pub mod commands;
pub mod config;

use std::fs;
use std::io::Write;

use thiserror::Error;

use helicoid_core::export::write_atomic;

pub use args::{Cli, Command, Options};
pub use commands::{execute, Output};
pub use config::{Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input: exit code 2.
    #[error("{0}")]
    Precondition(String),
    /// Numerical or I/O failure: exit code 1.
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Precondition(_) => 2,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<helicoid_core::Error> for CliError {
    fn from(e: helicoid_core::Error) -> Self {
        if e.is_precondition() {
            CliError::Precondition(e.to_string())
        } else {
            CliError::Internal(e.to_string())
        }
    }
}

/// Merges the config file (if any) with the flags.
pub fn resolve_config(opts: &Options) -> Result<RunConfig, CliError> {
    let flags = opts.to_config();
    match &opts.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Precondition(format!("cannot read {}: {}", path.display(), e)))?;
            let file = RunConfig::parse(&text).map_err(|e| CliError::Precondition(format!("{}: {}", path.display(), e)))?;
            Ok(file.merge(flags))
        }
        None => Ok(flags),
    }
}

/// Runs a parsed command line, writing output to the configured path or
/// to `stdout`. Files are written only after every computation succeeded.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let cfg = resolve_config(&cli.opts)?;
    let out = execute(cli.command, &cfg)?;
    match &out.path {
        Some(path) => write_atomic(path, &out.content).map_err(|e| CliError::Internal(e.to_string())),
        None => stdout
            .write_all(out.content.as_bytes())
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}
