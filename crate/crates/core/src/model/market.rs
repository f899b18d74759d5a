use super::{
    apply_threshold_drift, check_switch, generate_thresholds, switch_agent, AgentState, MarketState, ModelParams,
    Position, StepOutcome, TimeSeriesRecord,
};
use crate::error::{Error, Result};
use crate::stochastics::RngStream;

/// Mean position of the agents.
pub fn sentiment(positions: &[Position]) -> Result<f64> {
    if positions.is_empty() {
        return Err(Error::Parameter("sentiment of an empty population".into()));
    }
    Ok(lattice_mean(positions.iter().map(|p| p.sign()), positions.len()))
}

// Summing integers keeps σ·M exact before the single division.
fn lattice_mean(signs: impl Iterator<Item = i8>, len: usize) -> f64 {
    let total: i64 = signs.map(i64::from).sum();
    total as f64 / len as f64
}

/// `1 + 2|σ|` with feedback on, `1` otherwise.
pub fn volatility_factor(sigma: f64, feedback_on: bool) -> f64 {
    if feedback_on {
        1.0 + 2.0 * sigma.abs()
    } else {
        1.0
    }
}

/// `p exp((√h η − h/2) f(σ) + κ Δσ)`.
pub fn price_update(price: f64, eta: f64, sigma: f64, d_sigma: f64, params: &ModelParams) -> Result<f64> {
    if !(price.is_finite() && eta.is_finite() && sigma.is_finite() && d_sigma.is_finite()) {
        return Err(Error::Numeric(format!(
            "non-finite price update input (p={price}, eta={eta}, sigma={sigma}, d_sigma={d_sigma})"
        )));
    }
    let f = volatility_factor(sigma, params.volatility_feedback);
    let next = price * (information_increment(eta, params.h) * f + params.kappa * d_sigma).exp();
    if !(next.is_finite() && next > 0.0) {
        return Err(Error::Numeric(format!("price update produced {next}")));
    }
    Ok(next)
}

/// `p exp(√h η − h/2)`: the uncoupled reference path.
pub fn emh_price_update(price: f64, eta: f64, h: f64) -> f64 {
    price * information_increment(eta, h).exp()
}

// Shared by both updates so that κ = 0, f ≡ 1 reproduces the reference
// path bit for bit.
fn information_increment(eta: f64, h: f64) -> f64 {
    h.sqrt() * eta - h / 2.0
}

impl MarketState {
    /// Fresh market at `p0`. Agents are initialised in index order, each
    /// drawing its sign, then `C`, then `X_L`, `X_U`.
    pub fn init(params: &ModelParams, rng: &mut RngStream) -> Result<Self> {
        params.validate()?;
        let mut agents = Vec::with_capacity(params.agents);
        for _ in 0..params.agents {
            let position = Position::from_sign(rng.sign())?;
            let herding = if params.c_lo < params.c_hi {
                rng.uniform(params.c_lo, params.c_hi)?
            } else {
                // keep one draw per agent even when the support is a point
                rng.uniform(0.0, 1.0)?;
                params.c_lo
            };
            let (lower, upper) = generate_thresholds(params.p0, rng, params)?;
            agents.push(AgentState {
                position,
                lower,
                upper,
                herding,
            });
        }
        let sigma = lattice_mean(agents.iter().map(|a| a.position.sign()), agents.len());
        Ok(Self {
            step: 0,
            price: params.p0,
            emh_price: params.p0,
            sigma,
            sigma_prev: sigma,
            agents,
        })
    }

    /// Draws `η(n)` and advances one step.
    pub fn step(&mut self, rng: &mut RngStream, params: &ModelParams) -> Result<StepOutcome> {
        let eta = rng.standard_normal();
        self.step_with_eta(eta, rng, params)
    }

    /// One step with a given information shock. The pipeline is:
    ///
    /// 1. price and reference price from `σ(n)` and `Δσ(n) = σ(n) − σ(n−1)`;
    /// 2. threshold drift for every agent using `σ(n)`;
    /// 3. a single switch pass in index order against `p(n+1)`, new bands
    ///    drawn at `p(n+1)`;
    /// 4. `σ(n+1)` from the updated positions.
    ///
    /// Switches made here reach the price only through `Δσ` on the next step.
    pub fn step_with_eta(&mut self, eta: f64, rng: &mut RngStream, params: &ModelParams) -> Result<StepOutcome> {
        let n = self.step;
        let price = price_update(self.price, eta, self.sigma, self.sigma - self.sigma_prev, params)?;
        let emh_price = emh_price_update(self.emh_price, eta, params.h);

        let incentive = params.incentive_active(n);
        for agent in &mut self.agents {
            *agent = apply_threshold_drift(*agent, self.sigma, params, incentive);
        }

        let mut n_switches = 0u32;
        for agent in &mut self.agents {
            if check_switch(agent, price) {
                *agent = switch_agent(*agent, price, rng, params)?;
                n_switches += 1;
            }
        }

        self.sigma_prev = self.sigma;
        self.sigma = lattice_mean(self.agents.iter().map(|a| a.position.sign()), self.agents.len());
        self.price = price;
        self.emh_price = emh_price;
        self.step = n + 1;

        let record = TimeSeriesRecord {
            step: n,
            eta,
            price,
            emh_price,
            sentiment: self.sigma,
            n_switches,
        };
        Ok(StepOutcome { record, n_switches })
    }

    pub fn positions(&self) -> Vec<Position> {
        self.agents.iter().map(|a| a.position).collect()
    }
}
