//! Straight-line re-implementation of the model for three agents: plain
//! arrays and explicit formulas, sharing nothing with the model code except
//! the random stream.

#![allow(dead_code)]

use mtm_core::model::{MarketState, ModelParams};
use mtm_core::RngStream;

pub struct Trace {
    price: Vec<f64>,
    emh: Vec<f64>,
    sigma: Vec<f64>,
    lower: Vec<[f64; 3]>,
    upper: Vec<[f64; 3]>,
    signs: Vec<[f64; 3]>,
    switches: Vec<u32>,
}

/// Brute-force trace: arrays, explicit formulas, no shared model code.
pub fn brute_force(params: &ModelParams, seed: u64, etas: &[f64]) -> Trace {
    assert_eq!(params.agents, 3);
    let mut rng = RngStream::new(seed);
    let mut s = [0.0f64; 3];
    let mut c = [0.0f64; 3];
    let mut lo = [0.0f64; 3];
    let mut up = [0.0f64; 3];
    for i in 0..3 {
        s[i] = rng.sign() as f64;
        c[i] = rng.uniform(params.c_lo, params.c_hi).unwrap();
        let xl = rng.uniform(params.x_lo, params.x_hi).unwrap();
        let xu = rng.uniform(params.x_lo, params.x_hi).unwrap();
        lo[i] = params.p0 / (1.0 + xl);
        up[i] = (1.0 + xu) * params.p0;
    }
    let mut sig = (s[0] + s[1] + s[2]) / 3.0;
    let mut sig_prev = sig;
    let mut p = params.p0;
    let mut pe = params.p0;
    let h = params.h;
    let mut out = Trace {
        price: vec![],
        emh: vec![],
        sigma: vec![],
        lower: vec![],
        upper: vec![],
        signs: vec![],
        switches: vec![],
    };
    for (n, &eta) in etas.iter().enumerate() {
        let f = if params.volatility_feedback {
            1.0 + 2.0 * sig.abs()
        } else {
            1.0
        };
        p *= ((h.sqrt() * eta - 0.5 * h) * f + params.kappa * (sig - sig_prev)).exp();
        pe *= (h.sqrt() * eta - 0.5 * h).exp();

        let incentive_on = params.incentive_rate > 0.0 && params.incentive_off_step.is_none_or(|off| (n as u64) < off);
        for i in 0..3 {
            if params.herding_enabled && s[i] * sig < 0.0 {
                lo[i] += c[i] * h * sig.abs();
                up[i] -= c[i] * h * sig.abs();
            }
            if incentive_on && s[i] == -(params.preferred_state.sign() as f64) {
                lo[i] += params.incentive_rate * h;
                up[i] -= params.incentive_rate * h;
            }
        }
        let mut k = 0;
        for i in 0..3 {
            if p <= lo[i] || p >= up[i] || lo[i] >= up[i] {
                s[i] = -s[i];
                let xl = rng.uniform(params.x_lo, params.x_hi).unwrap();
                let xu = rng.uniform(params.x_lo, params.x_hi).unwrap();
                lo[i] = p / (1.0 + xl);
                up[i] = (1.0 + xu) * p;
                k += 1;
            }
        }
        sig_prev = sig;
        sig = (s[0] + s[1] + s[2]) / 3.0;

        out.price.push(p);
        out.emh.push(pe);
        out.sigma.push(sig);
        out.lower.push(lo);
        out.upper.push(up);
        out.signs.push(s);
        out.switches.push(k);
    }
    out
}

pub fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

/// Steps `MarketState` alongside the brute-force trace. Returns the number
/// of switches seen, or a description of the first mismatch.
pub fn compare(params: &ModelParams, seed: u64, etas: &[f64]) -> Result<u32, String> {
    let oracle = brute_force(params, seed, etas);
    let mut rng = RngStream::new(seed);
    let mut market = MarketState::init(params, &mut rng).map_err(|e| e.to_string())?;
    for (n, &eta) in etas.iter().enumerate() {
        let out = market.step_with_eta(eta, &mut rng, params).map_err(|e| e.to_string())?;
        let mut checks = vec![
            ("price", market.price, oracle.price[n]),
            ("record price", out.record.price, oracle.price[n]),
            ("emh price", market.emh_price, oracle.emh[n]),
            ("sigma", market.sigma, oracle.sigma[n]),
            ("switches", out.n_switches as f64, oracle.switches[n] as f64),
        ];
        for (i, a) in market.agents.iter().enumerate() {
            checks.push(("sign", a.position.sign() as f64, oracle.signs[n][i]));
            checks.push(("lower", a.lower, oracle.lower[n][i]));
            checks.push(("upper", a.upper, oracle.upper[n][i]));
        }
        if let Some((what, got, want)) = checks.into_iter().find(|(_, a, b)| !close(*a, *b)) {
            return Err(format!("seed {seed} step {n}: {what} {got} != {want}"));
        }
    }
    Ok(oracle.switches.iter().sum())
}

// Narrow bands and a coarse step so that five pinned shocks produce switches.
pub fn busy_params() -> ModelParams {
    ModelParams {
        agents: 3,
        h: 0.0004,
        x_lo: 0.005,
        x_hi: 0.02,
        herding_enabled: true,
        volatility_feedback: true,
        incentive_rate: 20.0,
        incentive_off_step: Some(3),
        n_steps: 5,
        ..Default::default()
    }
}

pub const ETAS: [f64; 5] = [1.7, -2.3, 0.4, 2.9, -1.1];
