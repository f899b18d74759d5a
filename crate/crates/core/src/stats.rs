//! Statistics over completed price paths.
//!
//! All estimators use the moment (biased) definitions: central moments and
//! autocovariances are normalised by `N`, not `N - 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_LAG: usize = 250;
pub const DEFAULT_K_FRACTION: f64 = 0.05;

/// Log returns `r(n) = ln p(n+1) − ln p(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries {
    values: Vec<f64>,
}

impl ReturnSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter("return series must be nonempty".into()));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!("non-finite return {bad}")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Absolute returns, the volatility proxy.
    pub fn abs(&self) -> ReturnSeries {
        ReturnSeries {
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }
}

/// Autocorrelation at lags `1..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfCurve {
    pub lags: Vec<usize>,
    pub rho: Vec<f64>,
}

impl AcfCurve {
    /// `rho(k)`, or `None` outside `1..=K`.
    pub fn at(&self, lag: usize) -> Option<f64> {
        lag.checked_sub(1).and_then(|i| self.rho.get(i).copied())
    }

    /// Mean of `rho(k)` over `k = 1..=upto` (clamped to the curve length).
    pub fn mean_over(&self, upto: usize) -> f64 {
        let n = upto.min(self.rho.len());
        if n == 0 {
            return f64::NAN;
        }
        self.rho[..n].iter().sum::<f64>() / n as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsSummary {
    pub mean: f64,
    pub variance: f64,
    pub excess_kurtosis: f64,
    pub acf_returns: AcfCurve,
    pub acf_abs_returns: AcfCurve,
    pub tail_index: Option<f64>,
    pub n_samples: usize,
}

pub fn log_returns(prices: &[f64]) -> Result<ReturnSeries> {
    if prices.len() < 2 {
        return Err(Error::Parameter(format!(
            "need at least 2 prices for returns, got {}",
            prices.len()
        )));
    }
    if let Some(bad) = prices.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::Numeric(format!(
            "log return of nonpositive or non-finite price {bad}"
        )));
    }
    ReturnSeries::new(prices.windows(2).map(|w| (w[1] / w[0]).ln()).collect())
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance (divides by `N`).
pub fn variance(xs: &[f64]) -> f64 {
    central_moment(xs, mean(xs), 2)
}

fn central_moment(xs: &[f64], mean: f64, order: i32) -> f64 {
    xs.iter().map(|x| (x - mean).powi(order)).sum::<f64>() / xs.len() as f64
}

/// `m4 / m2² − 3`.
pub fn excess_kurtosis(series: &ReturnSeries) -> Result<f64> {
    let xs = series.values();
    if xs.len() < 4 {
        return Err(Error::Degenerate(format!("kurtosis needs N >= 4, got {}", xs.len())));
    }
    let mu = mean(xs);
    let m2 = central_moment(xs, mu, 2);
    if m2 <= 0.0 {
        return Err(Error::Degenerate("kurtosis of a zero-variance series".into()));
    }
    let m4 = central_moment(xs, mu, 4);
    Ok(m4 / (m2 * m2) - 3.0)
}

/// Sample autocorrelation with the full-sample mean and the lag-0
/// autocovariance of the whole series as denominator.
pub fn acf(series: &ReturnSeries, max_lag: usize) -> Result<AcfCurve> {
    let xs = series.values();
    let n = xs.len();
    if max_lag < 1 || max_lag >= n {
        return Err(Error::Parameter(format!("max_lag must be in 1..{n}, got {max_lag}")));
    }
    let mu = mean(xs);
    let centered: Vec<f64> = xs.iter().map(|x| x - mu).collect();
    let denom: f64 = centered.iter().map(|d| d * d).sum();
    if denom <= 0.0 {
        return Err(Error::Degenerate("autocorrelation of a zero-variance series".into()));
    }
    let rho = (1..=max_lag)
        .map(|k| {
            let num: f64 = centered.iter().zip(&centered[k..]).map(|(a, b)| a * b).sum();
            num / denom
        })
        .collect();
    Ok(AcfCurve {
        lags: (1..=max_lag).collect(),
        rho,
    })
}

/// Hill estimate of the tail exponent of `|r|`.
///
/// With `k = ceil(k_fraction · N)` and the positive absolute values sorted
/// descending as `x_(1) ≥ x_(2) ≥ …`, returns
/// `k / Σ_{i=1..k} ln(x_(i) / x_(k+1))`. Zero values never enter the tail.
pub fn hill_tail_index(series: &ReturnSeries, k_fraction: f64) -> Result<f64> {
    let n = series.len();
    if n < 50 {
        return Err(Error::Parameter(format!("Hill estimator needs N >= 50, got {n}")));
    }
    if !(k_fraction > 0.0 && k_fraction <= 0.2) {
        return Err(Error::Parameter(format!(
            "k_fraction must be in (0, 0.2], got {k_fraction}"
        )));
    }
    let k = (k_fraction * n as f64).ceil() as usize;

    let mut tail: Vec<f64> = series.values().iter().map(|x| x.abs()).filter(|x| *x > 0.0).collect();
    if tail.len() <= k {
        return Err(Error::Degenerate(format!(
            "Hill estimator needs more than k = {k} positive values, got {}",
            tail.len()
        )));
    }
    tail.sort_unstable_by(|a, b| b.total_cmp(a));
    let threshold = tail[k];
    let log_excess: f64 = tail[..k].iter().map(|x| (x / threshold).ln()).sum();
    if log_excess <= 0.0 {
        return Err(Error::Degenerate(
            "Hill estimator: top order statistics are all tied".into(),
        ));
    }
    Ok(k as f64 / log_excess)
}

/// Moments, return and volatility ACFs, and the tail index of a price path.
/// The tail index is `None` when the Hill preconditions fail.
pub fn summarize(prices: &[f64], max_lag: usize, k_fraction: f64) -> Result<StatsSummary> {
    let returns = log_returns(prices)?;
    let xs = returns.values();
    let excess_kurtosis = excess_kurtosis(&returns)?;
    let acf_returns = acf(&returns, max_lag)?;
    let acf_abs_returns = acf(&returns.abs(), max_lag)?;
    Ok(StatsSummary {
        mean: mean(xs),
        variance: variance(xs),
        excess_kurtosis,
        acf_returns,
        acf_abs_returns,
        tail_index: hill_tail_index(&returns, k_fraction).ok(),
        n_samples: returns.len(),
    })
}

/// Equal-width histogram over `[lo, hi]`; values outside are dropped.
/// Returns `bins + 1` edges and `bins` counts.
pub fn histogram(xs: &[f64], lo: f64, hi: f64, bins: usize) -> (Vec<f64>, Vec<u64>) {
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins).map(|i| lo + width * i as f64).collect();
    let mut counts = vec![0u64; bins];
    for &x in xs {
        if !(lo..=hi).contains(&x) {
            continue;
        }
        let idx = (((x - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    (edges, counts)
}
