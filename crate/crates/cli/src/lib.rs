//! Command-line front end for the moving-threshold market simulator.

pub mod config;
pub mod output;

use std::io::Write;

use mtm_core::scenarios::{run_ensemble, run_ensemble_with_threads};
use thiserror::Error;

pub use config::{parse_args, CliConfig, Parsed};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUN: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("I/O error: {0}")]
    Io(String),
    #[error("simulation failed: {0}")]
    Run(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Run(_) => EXIT_RUN,
        }
    }
}

/// Runs the configured ensemble and writes its output files.
pub fn execute(config: &CliConfig, log: &mut impl Write) -> Result<(), CliError> {
    let results = match config.threads {
        Some(n) => run_ensemble_with_threads(&config.run, n),
        None => run_ensemble(&config.run),
    }
    .map_err(|e| CliError::Run(e.to_string()))?;

    let written = output::emit_all(&config.run, &results, &config.out_dir)?;

    let kurt: Vec<f64> = results.iter().map(|r| r.summary.excess_kurtosis).collect();
    let mean = kurt.iter().sum::<f64>() / kurt.len() as f64;
    let (lo, hi) = kurt.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| {
        (lo.min(*k), hi.max(*k))
    });
    // progress output is best effort
    let _ = writeln!(
        log,
        "{}: {} seeds x {} steps, excess kurtosis mean {:.3} range [{:.3}, {:.3}]; wrote {} files to {}",
        config.scenario,
        results.len(),
        config.run.params.n_steps,
        mean,
        lo,
        hi,
        written.len(),
        config.out_dir.display()
    );
    Ok(())
}

/// Full entry point: parse, run, write. Returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match parse_args(argv) {
        Ok(Parsed::Run(c)) => c,
        Ok(Parsed::Info(text)) => {
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    match execute(&config, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
