//! The moving-threshold market model.
//!
//! Each of `M` agents holds a position `s = ±1` and a threshold pair
//! `(L, U)` generated around the price at which it last switched. The
//! sentiment `σ` is the mean position. The log price moves with an
//! exogenous Gaussian information stream, scaled by the volatility factor
//! `f(σ)`, plus `κ Δσ` from the previous step's switching.

mod agent;
mod market;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use agent::{apply_threshold_drift, check_switch, generate_thresholds, switch_agent};
pub use market::{emh_price_update, price_update, sentiment, volatility_factor};

/// An agent's market position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Position {
    Long,
    Short,
}

impl Position {
    pub fn from_sign(sign: i8) -> Result<Self> {
        match sign {
            1 => Ok(Position::Long),
            -1 => Ok(Position::Short),
            other => Err(Error::Parameter(format!("position must be +1 or -1, got {other}"))),
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Position::Long => 1,
            Position::Short => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Position::Long => Position::Short,
            Position::Short => Position::Long,
        }
    }
}

/// Scalar parameters of one simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Timestep length in variance units.
    pub h: f64,
    /// Number of agents `M`.
    pub agents: usize,
    /// Market-depth coupling of `Δσ` into the log price.
    pub kappa: f64,
    /// Support of the threshold offsets `X_L`, `X_U`.
    pub x_lo: f64,
    pub x_hi: f64,
    /// Support of the per-agent herding coefficients `C_i`.
    pub c_lo: f64,
    pub c_hi: f64,
    /// Incentive drift rate `R`.
    pub incentive_rate: f64,
    /// First step at which the incentive no longer applies.
    pub incentive_off_step: Option<u64>,
    /// Position favoured by the incentive.
    pub preferred_state: Position,
    /// Use `f(σ) = 1 + 2|σ|` instead of `f ≡ 1`.
    pub volatility_feedback: bool,
    pub herding_enabled: bool,
    pub n_steps: usize,
    /// Initial price.
    pub p0: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            h: 0.00004,
            agents: 100,
            kappa: 0.2,
            x_lo: 0.1,
            x_hi: 0.3,
            c_lo: 0.0,
            c_hi: 100.0,
            incentive_rate: 0.0,
            incentive_off_step: None,
            preferred_state: Position::Long,
            volatility_feedback: false,
            herding_enabled: false,
            n_steps: 10_000,
            p0: 1.0,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        fn check(ok: bool, msg: &str) -> Result<()> {
            if ok {
                Ok(())
            } else {
                Err(Error::Parameter(msg.to_string()))
            }
        }
        check(self.h.is_finite() && self.h > 0.0, "h must be finite and > 0")?;
        check(self.agents >= 1, "agent count must be >= 1")?;
        check(
            self.kappa.is_finite() && self.kappa >= 0.0,
            "kappa must be finite and >= 0",
        )?;
        check(
            self.x_lo.is_finite() && self.x_hi.is_finite() && 0.0 < self.x_lo && self.x_lo < self.x_hi,
            "threshold offsets need 0 < x_lo < x_hi",
        )?;
        check(
            self.c_lo.is_finite() && self.c_hi.is_finite() && 0.0 <= self.c_lo && self.c_lo <= self.c_hi,
            "herding coefficients need 0 <= c_lo <= c_hi",
        )?;
        check(
            self.incentive_rate.is_finite() && self.incentive_rate >= 0.0,
            "incentive rate R must be finite and >= 0",
        )?;
        check(self.n_steps >= 1, "n_steps must be >= 1")?;
        check(self.p0.is_finite() && self.p0 > 0.0, "p0 must be finite and > 0")?;
        Ok(())
    }

    /// Whether the incentive drift applies during step `n`.
    pub fn incentive_active(&self, n: u64) -> bool {
        self.incentive_rate > 0.0 && self.incentive_off_step.is_none_or(|off| n < off)
    }
}

/// One agent: position, current thresholds and its fixed herding coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub position: Position,
    pub lower: f64,
    pub upper: f64,
    pub herding: f64,
}

/// Full simulation state between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct MarketState {
    /// Number of completed steps.
    pub step: u64,
    pub price: f64,
    /// Reference path driven by the same information stream with no coupling.
    pub emh_price: f64,
    pub sigma: f64,
    pub sigma_prev: f64,
    pub agents: Vec<AgentState>,
}

/// Output row for one executed step.
///
/// `step` is the index `n` of the step executed; `eta` is `η(n)`; the price,
/// reference price and sentiment are the post-step values `p(n+1)`,
/// `p_emh(n+1)` and `σ(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSeriesRecord {
    pub step: u64,
    pub eta: f64,
    pub price: f64,
    pub emh_price: f64,
    pub sentiment: f64,
    pub n_switches: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub record: TimeSeriesRecord,
    pub n_switches: u32,
}
