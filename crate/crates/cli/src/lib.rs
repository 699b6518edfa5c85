//! Library side of the `epperturb` command-line tool.
//!
//! [`report`] turns a parsed [`Command`] into a JSON report
//! `{"schema_version", "command", "inputs", "results"}`; grids can also be
//! rendered as CSV. [`main_with_args`] is the whole binary.

pub mod args;
mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use serde_json::Value;

pub use args::{Cli, Command, Format};
pub use commands::report;
pub use output::render;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{name}: {0}", name = .0.name())]
    Numerical(#[from] epperturb_core::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

pub(crate) fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// A parsed invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Self {
        let format = cli.format.unwrap_or_else(|| cli.command.default_format());
        Self { command: cli.command, format, output: cli.output }
    }
}

pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    Cli::try_parse_from(argv).map(RunConfig::from_cli)
}

/// Rebuilds the command that produced a JSON report from its `command` and
/// `inputs` fields.
pub fn command_from_report(report: &Value) -> Result<Command, CliError> {
    let tagged = serde_json::json!({
        "command": report.get("command").cloned().unwrap_or(Value::Null),
        "inputs": report.get("inputs").cloned().unwrap_or(Value::Null),
    });
    serde_json::from_value(tagged).map_err(|e| usage(format!("report inputs: {e}")))
}

/// Runs the command and writes the rendered report.
pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let report = report(&config.command)?;
    let text = render(&config.command, &report, config.format)?;
    match &config.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Parses, runs and reports; returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
