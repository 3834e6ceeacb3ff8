//! `kitaev`: data files for Kitaev-chain zero modes, phase diagrams and
//! quantum-dot parity reversal.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 numerical failure
//! (or a failed oracle check), 4 empty or inapplicable result.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod config;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use args::{Cli, Command};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<kitaev_core::Error> for CliError {
    fn from(e: kitaev_core::Error) -> Self {
        let code = if e.is_numerical() {
            3
        } else if e.is_inapplicable() {
            4
        } else {
            2
        };
        Self { code, message: e.to_string() }
    }
}

/// Merge flags over the config file over defaults; return the resolved
/// arguments and the header configuration.
fn resolve<T>(
    flags: T,
    file: Option<&Map<String, Value>>,
    name: &str,
    merge: fn(T, T) -> T,
) -> Result<(T, Value), CliError>
where
    T: DeserializeOwned + Serialize + Default,
{
    let base = config::layer::<T>(file, name)?;
    let resolved = merge(flags, base);
    let header = config::header(name, &resolved);
    Ok((resolved, header))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::usage("--threads must be at least 1"));
        }
        kitaev_core::par::init_global_threads(threads).map_err(CliError::usage)?;
    }
    let file = cli.config.as_deref().map(config::load).transpose()?;
    let file = file.as_ref();
    let ts = kitaev_core::io::timestamp_now();

    macro_rules! dispatch {
        ($flags:expr, $name:literal, $cmd:path) => {{
            let (args, header) = resolve($flags, file, $name, |a, b| a.overlay(b).with_defaults())?;
            $cmd(&args, &header, &ts)?
        }};
    }
    let outcome = match cli.command {
        Command::Spectrum(a) => dispatch!(a, "spectrum", commands::spectrum),
        Command::ZeroModes(a) => dispatch!(a, "zero-modes", commands::zero_modes),
        Command::Density(a) => dispatch!(a, "density", commands::density),
        Command::Matrix(a) => dispatch!(a, "matrix", commands::matrix),
        Command::PhaseScan(a) => dispatch!(a, "phase-scan", commands::phase_scan),
        Command::NoiseScan(a) => dispatch!(a, "noise-scan", commands::noise_scan),
        Command::DotSweep(a) => dispatch!(a, "dot-sweep", commands::dot_sweep),
        Command::OracleCheck(a) => dispatch!(a, "oracle-check", commands::oracle_check),
    };

    for emit in outcome.files {
        match emit.path.as_ref().or(cli.output.as_ref()) {
            Some(path) => fs::write(path, &emit.text)
                .map_err(|e| CliError { code: 1, message: format!("cannot write {}: {e}", path.display()) })?,
            None => std::io::stdout()
                .write_all(emit.text.as_bytes())
                .map_err(|e| CliError { code: 1, message: format!("cannot write output: {e}") })?,
        }
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
