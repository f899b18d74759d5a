//! Model trace against the brute-force oracle.

mod oracle;

use mtm_core::model::ModelParams;
use oracle::{busy_params, compare, ETAS};

#[test]
fn matches_brute_force_with_switching() {
    let params = busy_params();
    let mut total = 0;
    for seed in 0..50 {
        total += compare(&params, seed, &ETAS).unwrap();
    }
    assert!(total > 20, "trace exercised only {total} switches");
}

#[test]
fn matches_brute_force_paper_parameters() {
    let params = ModelParams {
        agents: 3,
        herding_enabled: true,
        volatility_feedback: true,
        n_steps: 5,
        ..Default::default()
    };
    for seed in 0..20 {
        compare(&params, seed, &ETAS).unwrap();
    }
}

#[test]
fn matches_brute_force_without_feedback() {
    let params = ModelParams {
        volatility_feedback: false,
        herding_enabled: false,
        kappa: 0.5,
        ..busy_params()
    };
    for seed in 0..20 {
        compare(&params, seed, &ETAS).unwrap();
    }
}
