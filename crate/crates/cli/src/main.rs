//! `potentialkit`: energies, potentials, identities and equilibrium weights
//! from the command line.
//!
//! Exit status: 0 on success, 1 on an input or usage error, 2 when a limit
//! did not converge (or an identity missed its tolerance).

mod args;
mod commands;
mod output;

use std::fs;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use args::{Cli, Command, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] potentialkit::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

fn run(cli: &Cli) -> Result<bool, CliError> {
    let cfg = RunConfig::from_args(&cli.global)?;
    if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global()
            .map_err(|e| CliError::input(format!("thread pool: {e}")))?;
    }
    let report = match &cli.command {
        Command::Energy(a) => commands::energy(a, &cfg)?,
        Command::Identity(a) => commands::identity(a, &cfg)?,
        Command::Equilibrium(a) => commands::equilibrium(a, &cfg)?,
        Command::Sweep(a) => commands::sweep(a, &cfg)?,
        Command::Potential(a) => commands::potential(a, &cfg)?,
    };
    let text = match cfg.format {
        Format::Json => output::to_json(&report.json),
        Format::Csv => report.table.render(),
    };
    match &cli.global.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(report.converged)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            // clap would use 2, which is reserved for non-convergence here
            return if usage { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("warning: did not converge to the requested tolerance");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
