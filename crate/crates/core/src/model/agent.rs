use super::{AgentState, ModelParams};
use crate::error::Result;
use crate::stochastics::RngStream;

/// Draws `X_L` then `X_U` from `U[x_lo, x_hi)` and returns
/// `(P / (1 + X_L), (1 + X_U) P)`.
pub fn generate_thresholds(price: f64, rng: &mut RngStream, params: &ModelParams) -> Result<(f64, f64)> {
    let x_lower = rng.uniform(params.x_lo, params.x_hi)?;
    let x_upper = rng.uniform(params.x_lo, params.x_hi)?;
    Ok(thresholds_from_offsets(price, x_lower, x_upper))
}

pub(crate) fn thresholds_from_offsets(price: f64, x_lower: f64, x_upper: f64) -> (f64, f64) {
    (price / (1.0 + x_lower), (1.0 + x_upper) * price)
}

/// Inward drift of one agent's thresholds for a single step.
///
/// Herding moves a strict-minority agent's band in by `C h |σ|` on each
/// side. The incentive moves the band of an agent holding the disfavoured
/// position in by `R h`. The two add when both apply.
pub fn apply_threshold_drift(
    agent: AgentState,
    sigma: f64,
    params: &ModelParams,
    incentive_active: bool,
) -> AgentState {
    let mut shift = 0.0;
    if params.herding_enabled && f64::from(agent.position.sign()) * sigma < 0.0 {
        shift += agent.herding * params.h * sigma.abs();
    }
    if incentive_active && agent.position == params.preferred_state.flipped() {
        shift += params.incentive_rate * params.h;
    }
    if shift == 0.0 {
        return agent;
    }
    AgentState {
        lower: agent.lower + shift,
        upper: agent.upper - shift,
        ..agent
    }
}

/// True when `price` is on or outside the band, or the band has collapsed.
pub fn check_switch(agent: &AgentState, price: f64) -> bool {
    price <= agent.lower || price >= agent.upper || agent.lower >= agent.upper
}

/// Flips the agent's position and draws a fresh band around `price`.
pub fn switch_agent(agent: AgentState, price: f64, rng: &mut RngStream, params: &ModelParams) -> Result<AgentState> {
    let (lower, upper) = generate_thresholds(price, rng, params)?;
    Ok(AgentState {
        position: agent.position.flipped(),
        lower,
        upper,
        herding: agent.herding,
    })
}
