//! Named experiment presets, single runs and seeded ensembles.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{MarketState, ModelParams, TimeSeriesRecord};
use crate::stats::{self, StatsSummary, DEFAULT_K_FRACTION, DEFAULT_MAX_LAG};
use crate::stochastics::{substream_seed, RngStream};

pub const DEFAULT_ENSEMBLE_SIZE: usize = 32;
pub const DEFAULT_MASTER_SEED: u64 = 42;
pub const PRESET_INCENTIVE_RATE: f64 = 100.0;
pub const PRESET_INCENTIVE_OFF_STEP: u64 = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Fixed thresholds, `f ≡ 1`.
    EmhBaseline,
    /// Herding drift with volatility feedback.
    Herding,
    /// Herding plus an incentive toward `+1` that stops at step 5000.
    HerdingIncentive,
    /// Model defaults, meant to be overridden.
    Custom,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 4] = [
        ScenarioKind::EmhBaseline,
        ScenarioKind::Herding,
        ScenarioKind::HerdingIncentive,
        ScenarioKind::Custom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::EmhBaseline => "emh_baseline",
            ScenarioKind::Herding => "herding",
            ScenarioKind::HerdingIncentive => "herding_incentive",
            ScenarioKind::Custom => "custom",
        }
    }

    pub fn params(self) -> ModelParams {
        let base = ModelParams::default();
        match self {
            ScenarioKind::EmhBaseline | ScenarioKind::Custom => base,
            ScenarioKind::Herding => ModelParams {
                herding_enabled: true,
                volatility_feedback: true,
                ..base
            },
            ScenarioKind::HerdingIncentive => ModelParams {
                herding_enabled: true,
                volatility_feedback: true,
                incentive_rate: PRESET_INCENTIVE_RATE,
                incentive_off_step: Some(PRESET_INCENTIVE_OFF_STEP),
                ..base
            },
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScenarioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ScenarioKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| {
            Error::Parameter(format!(
                "unknown scenario '{s}' (expected emh_baseline, herding, herding_incentive or custom)"
            ))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub params: ModelParams,
    pub n_seeds: usize,
    pub master_seed: u64,
    pub max_lag: usize,
    pub k_fraction: f64,
}

impl ScenarioConfig {
    pub fn preset(kind: ScenarioKind) -> Self {
        Self {
            kind,
            params: kind.params(),
            n_seeds: DEFAULT_ENSEMBLE_SIZE,
            master_seed: DEFAULT_MASTER_SEED,
            max_lag: DEFAULT_MAX_LAG,
            k_fraction: DEFAULT_K_FRACTION,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.n_seeds == 0 {
            return Err(Error::Parameter("ensemble needs at least one seed".into()));
        }
        if self.max_lag == 0 || self.max_lag >= self.params.n_steps {
            return Err(Error::Parameter(format!(
                "max_lag must be in 1..{} for {} steps",
                self.params.n_steps, self.params.n_steps
            )));
        }
        if !(self.k_fraction > 0.0 && self.k_fraction <= 0.2) {
            return Err(Error::Parameter(format!(
                "k_fraction must be in (0, 0.2], got {}",
                self.k_fraction
            )));
        }
        Ok(())
    }

    /// Seed of ensemble member `member`.
    pub fn member_seed(&self, member: usize) -> u64 {
        substream_seed(self.master_seed, member as u64)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub seed: u64,
    /// Price before the first step.
    pub p0: f64,
    pub records: Vec<TimeSeriesRecord>,
    pub summary: StatsSummary,
}

impl RunResult {
    /// `p(0), p(1), …, p(n_steps)`.
    pub fn prices(&self) -> Vec<f64> {
        std::iter::once(self.p0)
            .chain(self.records.iter().map(|r| r.price))
            .collect()
    }

    /// Return of step `n` is `ln p(n+1) − ln p(n)`, one per record.
    pub fn returns(&self) -> Vec<f64> {
        let mut prev = self.p0;
        self.records
            .iter()
            .map(|r| {
                let x = (r.price / prev).ln();
                prev = r.price;
                x
            })
            .collect()
    }

    pub fn mean_sentiment(&self) -> f64 {
        stats::mean(&self.records.iter().map(|r| r.sentiment).collect::<Vec<_>>())
    }
}

/// Simulates `params.n_steps` steps from a fresh market seeded with `seed`.
/// The summary covers the `n_steps` returns of `p(0) … p(n_steps)`.
pub fn run_scenario(config: &ScenarioConfig, seed: u64) -> Result<RunResult> {
    config.validate()?;
    let params = &config.params;
    let mut rng = RngStream::new(seed);
    let mut market = MarketState::init(params, &mut rng)?;
    let mut records = Vec::with_capacity(params.n_steps);
    for _ in 0..params.n_steps {
        records.push(market.step(&mut rng, params)?.record);
    }
    let prices: Vec<f64> = std::iter::once(params.p0)
        .chain(records.iter().map(|r| r.price))
        .collect();
    let summary = stats::summarize(&prices, config.max_lag, config.k_fraction)?;
    Ok(RunResult {
        seed,
        p0: params.p0,
        records,
        summary,
    })
}

/// One run per member seed, in member order, on the current rayon pool.
pub fn run_ensemble(config: &ScenarioConfig) -> Result<Vec<RunResult>> {
    config.validate()?;
    (0..config.n_seeds)
        .into_par_iter()
        .map(|member| run_scenario(config, config.member_seed(member)))
        .collect()
}

/// [`run_ensemble`] on a dedicated pool of `threads` workers.
pub fn run_ensemble_with_threads(config: &ScenarioConfig, threads: usize) -> Result<Vec<RunResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Parameter(format!("cannot build thread pool: {e}")))?;
    pool.install(|| run_ensemble(config))
}

/// Sequential reference for [`run_ensemble`].
pub fn run_ensemble_serial(config: &ScenarioConfig) -> Result<Vec<RunResult>> {
    config.validate()?;
    (0..config.n_seeds)
        .map(|member| run_scenario(config, config.member_seed(member)))
        .collect()
}

/// Sentiment means and return volatilities before and after a split step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncentiveReport {
    pub mean_sigma_before: f64,
    pub mean_sigma_after: f64,
    pub vol_before: f64,
    pub vol_after: f64,
}

/// Compares steps `[0, split_step)` with `[split_step, n_steps)`.
/// Volatility is the population standard deviation of log returns.
pub fn incentive_effect_report(result: &RunResult, split_step: usize) -> Result<IncentiveReport> {
    let n = result.records.len();
    if split_step == 0 || split_step >= n {
        return Err(Error::Parameter(format!(
            "split_step must be in 1..{n}, got {split_step}"
        )));
    }
    let sigma: Vec<f64> = result.records.iter().map(|r| r.sentiment).collect();
    let returns = result.returns();
    let (s_before, s_after) = sigma.split_at(split_step);
    let (r_before, r_after) = returns.split_at(split_step);
    Ok(IncentiveReport {
        mean_sigma_before: stats::mean(s_before),
        mean_sigma_after: stats::mean(s_after),
        vol_before: stats::variance(r_before).sqrt(),
        vol_after: stats::variance(r_after).sqrt(),
    })
}
