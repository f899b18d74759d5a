//! CSV and JSON rendering of run results.
//!
//! Reals are written with Rust's shortest round-trip formatting, so a file
//! parsed back yields the exact `f64` values of the run.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use mtm_core::scenarios::{RunResult, ScenarioConfig};
use mtm_core::stats;
use serde::Serialize;
use tempfile::NamedTempFile;

use crate::CliError;

pub const TIMESERIES_HEADER: &str = "step,eta,price,emh_price,sentiment,n_switches";
pub const HISTOGRAM_BINS: usize = 101;
pub const HISTOGRAM_HALF_WIDTH_SD: f64 = 6.0;

pub fn timeseries_file_name(seed: u64) -> String {
    format!("timeseries_{seed}.csv")
}

pub fn render_timeseries(result: &RunResult) -> String {
    let mut out = String::with_capacity(64 * (result.records.len() + 1));
    out.push_str(TIMESERIES_HEADER);
    out.push('\n');
    for r in &result.records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.step, r.eta, r.price, r.emh_price, r.sentiment, r.n_switches
        )
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn emit_timeseries(result: &RunResult, path: &Path) -> Result<(), CliError> {
    write_atomic(path, render_timeseries(result).as_bytes())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunStats {
    pub seed: u64,
    pub excess_kurtosis: f64,
    pub tail_index: Option<f64>,
    pub acf_returns: Vec<f64>,
    pub acf_abs_returns: Vec<f64>,
    pub mean_sigma: f64,
    pub return_variance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Aggregate {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Aggregate {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        Some(Self {
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean: stats::mean(values),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregates {
    pub excess_kurtosis: Aggregate,
    /// `None` when no run produced a tail index.
    pub tail_index: Option<Aggregate>,
    pub mean_sigma: Aggregate,
    pub return_variance: Aggregate,
}

/// Pooled histogram of all members' log returns over ±6 pooled standard
/// deviations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub std_dev: f64,
    pub n_returns: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub scenario: String,
    pub master_seed: u64,
    pub n_seeds: usize,
    pub n_steps: usize,
    pub max_lag: usize,
    pub k_fraction: f64,
    pub params: mtm_core::ModelParams,
    pub runs: Vec<RunStats>,
    pub aggregates: Aggregates,
    pub histogram: Histogram,
}

pub fn build_summary(config: &ScenarioConfig, results: &[RunResult]) -> Result<Summary, CliError> {
    if results.is_empty() {
        return Err(CliError::Run("summary of an empty ensemble".into()));
    }
    let runs: Vec<RunStats> = results
        .iter()
        .map(|r| RunStats {
            seed: r.seed,
            excess_kurtosis: r.summary.excess_kurtosis,
            tail_index: r.summary.tail_index,
            acf_returns: r.summary.acf_returns.rho.clone(),
            acf_abs_returns: r.summary.acf_abs_returns.rho.clone(),
            mean_sigma: r.mean_sentiment(),
            return_variance: r.summary.variance,
        })
        .collect();

    let column = |f: &dyn Fn(&RunStats) -> Option<f64>| runs.iter().filter_map(f).collect::<Vec<_>>();
    let required = |f: &dyn Fn(&RunStats) -> f64| Aggregate::of(&column(&|r| Some(f(r)))).expect("nonempty");
    let aggregates = Aggregates {
        excess_kurtosis: required(&|r| r.excess_kurtosis),
        tail_index: Aggregate::of(&column(&|r| r.tail_index)),
        mean_sigma: required(&|r| r.mean_sigma),
        return_variance: required(&|r| r.return_variance),
    };

    let pooled: Vec<f64> = results.iter().flat_map(|r| r.returns()).collect();
    let sd = stats::variance(&pooled).sqrt();
    let half = HISTOGRAM_HALF_WIDTH_SD * sd;
    let (bin_edges, counts) = stats::histogram(&pooled, -half, half, HISTOGRAM_BINS);

    Ok(Summary {
        scenario: config.kind.name().to_string(),
        master_seed: config.master_seed,
        n_seeds: results.len(),
        n_steps: config.params.n_steps,
        max_lag: config.max_lag,
        k_fraction: config.k_fraction,
        params: config.params.clone(),
        runs,
        aggregates,
        histogram: Histogram {
            bin_edges,
            counts,
            std_dev: sd,
            n_returns: pooled.len(),
        },
    })
}

pub fn render_summary(config: &ScenarioConfig, results: &[RunResult]) -> Result<String, CliError> {
    let summary = build_summary(config, results)?;
    let mut text = serde_json::to_string_pretty(&summary).map_err(|e| CliError::Run(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn emit_summary(config: &ScenarioConfig, results: &[RunResult], path: &Path) -> Result<(), CliError> {
    write_atomic(path, render_summary(config, results)?.as_bytes())
}

/// Writes every time series and the summary into `dir`. All files are
/// staged as temporaries in `dir` and renamed into place only after every
/// one has been written.
pub fn emit_all(config: &ScenarioConfig, results: &[RunResult], dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let mut staged = Vec::with_capacity(results.len() + 1);
    for r in results {
        let path = dir.join(timeseries_file_name(r.seed));
        staged.push((stage(&path, render_timeseries(r).as_bytes())?, path));
    }
    let path = dir.join("summary.json");
    staged.push((stage(&path, render_summary(config, results)?.as_bytes())?, path));

    let mut written = Vec::with_capacity(staged.len());
    for (tmp, path) in staged {
        tmp.persist(&path).map_err(|e| io_error(&path, e.error))?;
        written.push(path);
    }
    Ok(written)
}

fn stage(path: &Path, bytes: &[u8]) -> Result<NamedTempFile, CliError> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| io_error(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_error(path, e))?;
    tmp.flush().map_err(|e| io_error(path, e))?;
    Ok(tmp)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    stage(path, bytes)?
        .persist(path)
        .map(|_| ())
        .map_err(|e| io_error(path, e.error))
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}
