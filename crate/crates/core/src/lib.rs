//! Moving-threshold heterogeneous-agent market simulator.
//!
//! Agents hold a binary position and switch when the price leaves a band
//! `(L, U)` drawn around the price of their last switch. The band may drift
//! inward (herding toward the majority, or an external incentive), and
//! changes in the aggregate sentiment feed back into the log price.
//!
//! * [`stochastics`] seeded random streams with a fixed draw order
//! * [`model`] agents, thresholds, sentiment and the coupled price update
//! * [`stats`] return-series statistics (moments, ACF, Hill tail index)
//! * [`scenarios`] named presets, single runs and seeded ensembles

pub mod error;
pub mod model;
pub mod scenarios;
pub mod stats;
pub mod stochastics;

pub use error::{Error, Result};
pub use model::{AgentState, MarketState, ModelParams, Position, StepOutcome, TimeSeriesRecord};
pub use scenarios::{RunResult, ScenarioConfig, ScenarioKind};
pub use stats::{AcfCurve, ReturnSeries, StatsSummary};
pub use stochastics::RngStream;
