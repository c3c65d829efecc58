//! Batch driver for the monopole scattering toolkit.
//!
//! `monopole <command> [flags]` resolves a [`RunConfig`] from defaults, an
//! optional TOML file and flags, runs the command and writes CSV, JSON and SVG
//! results, each next to a `<file>.config.json` sidecar.

pub mod commands;
pub mod config;
pub mod output;
pub mod svg;

use std::ffi::OsString;

use clap::Parser;
use serde_json::json;

use monopole::{Error, Result};

pub use config::{Command, Overrides, RunConfig, OUT_ENV};
pub use output::Output;

#[derive(Debug, Parser)]
#[command(name = "monopole", version, about = "Partial-wave scattering on the Dirac monopole")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[command(flatten)]
    flags: Overrides,
}

/// Exit status for an error: 1 for convergence, accuracy and I/O failures,
/// 2 for everything caused by the configuration.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Convergence { .. } | Error::Accuracy(_) | Error::Io(_) => 1,
        _ => 2,
    }
}

/// Resolves the configuration and runs `command`; returns the summary line.
/// Convergence and accuracy failures also leave `<command>.error.json`.
pub fn run_command(command: Command, flags: &Overrides) -> Result<String> {
    let cfg = RunConfig::resolve(command, flags)?;
    run_config(&cfg)
}

pub fn run_config(cfg: &RunConfig) -> Result<String> {
    let command = cfg.command.ok_or_else(|| Error::Config("no command given".into()))?;
    let mut out = Output::new(cfg.output_dir(), serde_json::to_string_pretty(cfg).map_err(Error::from)?);
    let result = commands::execute(cfg, &mut out);
    if let Err(err) = &result {
        if exit_code(err) == 1 && !matches!(err, Error::Io(_)) {
            let (defect, threshold) = match err {
                Error::Convergence { defect, threshold } => (Some(*defect), Some(*threshold)),
                _ => (None, None),
            };
            let diag = json!({
                "command": command.name(),
                "error": err.to_string(),
                "defect": defect,
                "threshold": threshold,
            });
            out.write_json(&format!("{}.error.json", command.name()), &diag)?;
        }
    }
    result
}

/// Parses `argv` (including the program name), runs it and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_command(cli.command, &cli.flags) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(err) => {
            eprintln!("monopole {}: {err}", cli.command.name());
            exit_code(&err)
        }
    }
}
