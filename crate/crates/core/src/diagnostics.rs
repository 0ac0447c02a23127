//! Residual analysis (fit metrics, histograms) and the seeded ARIMA process
//! simulator used as the independent oracle across the test suites.

use chrono::NaiveDate;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::arima::{is_invertible, is_stationary, ArimaOrder};
use crate::error::{Error, Result};
use crate::series::{integrate_values, sample_acf, TimeSeries};

/// Forecast-error summary of a set of residuals (one Table-style row).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitMetrics {
    /// Mean error, residual = actual − fitted.
    pub me: f64,
    pub rmse: f64,
    pub mae: f64,
    /// Lag-1 autocorrelation of the residuals; 0 when degenerate.
    pub residual_acf1: f64,
    /// Set when the residuals had zero variance and acf1 is meaningless.
    pub acf1_degenerate: bool,
}

pub fn residual_metrics(residuals: &[f64]) -> Result<FitMetrics> {
    if residuals.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: residuals.len(),
        });
    }
    let n = residuals.len() as f64;
    let me = residuals.iter().sum::<f64>() / n;
    let rmse = (residuals.iter().map(|e| e * e).sum::<f64>() / n).sqrt();
    let mae = residuals.iter().map(|e| e.abs()).sum::<f64>() / n;
    let (residual_acf1, acf1_degenerate) = match sample_acf(residuals, 1) {
        Some(rho) => (rho[1], false),
        None => (0.0, true),
    };
    Ok(FitMetrics {
        me,
        rmse,
        mae,
        residual_acf1,
        acf1_degenerate,
    })
}

/// Equal-width histogram with b+1 edges spanning [min, max]; the last bin is
/// closed on the right, the rest are half-open.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramData {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub mean_marker: f64,
}

pub fn histogram(residuals: &[f64], bins: usize) -> Result<HistogramData> {
    if residuals.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if bins == 0 {
        return Err(Error::DomainError("bins must be positive".into()));
    }
    let mut lo = residuals.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut hi = residuals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo == hi {
        // Degenerate span: widen symmetrically so every bin is well defined.
        lo -= 0.5;
        hi += 0.5;
    }
    let width = (hi - lo) / bins as f64;
    let mut bin_edges: Vec<f64> = (0..=bins).map(|i| lo + i as f64 * width).collect();
    bin_edges[bins] = hi;

    let mut counts = vec![0usize; bins];
    for &v in residuals {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let mean_marker = residuals.iter().sum::<f64>() / residuals.len() as f64;
    Ok(HistogramData {
        bin_edges,
        counts,
        mean_marker,
    })
}

/// Generates an ARIMA(p,d,q) sample path of length `n` from seeded ChaCha8
/// Gaussian innovations: ARMA recursion after a discarded burn-in of
/// max(200, 10·(p+q)) steps, then d-fold cumulative integration. Identical
/// (seed, parameters) give bit-identical output on every platform.
pub fn simulate_arima(
    order: ArimaOrder,
    phi: &[f64],
    theta: &[f64],
    mean: f64,
    sigma: f64,
    n: usize,
    seed: u64,
) -> Result<TimeSeries> {
    if phi.len() != order.p {
        return Err(Error::DimensionMismatch {
            expected: order.p,
            got: phi.len(),
        });
    }
    if theta.len() != order.q {
        return Err(Error::DimensionMismatch {
            expected: order.q,
            got: theta.len(),
        });
    }
    if n == 0 {
        return Err(Error::DomainError("n must be positive".into()));
    }
    if sigma < 0.0 {
        return Err(Error::DomainError("sigma must be non-negative".into()));
    }
    if !is_stationary(phi) {
        return Err(Error::DomainError(
            "AR coefficients are not stationary".into(),
        ));
    }
    if !is_invertible(theta) {
        return Err(Error::DomainError(
            "MA coefficients are not invertible".into(),
        ));
    }

    let p = order.p;
    let q = order.q;
    let burn_in = 200.max(10 * (p + q));
    let total = burn_in + n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // Pre-sample state: process at its fixed point, shocks at zero.
    let mut w = vec![mean; total + p];
    let mut shocks = vec![0.0; total + q];
    for t in 0..total {
        let z: f64 = StandardNormal.sample(&mut rng);
        let eps = sigma * z;
        let mut value = mean + eps;
        for (i, ph) in phi.iter().enumerate() {
            value += ph * (w[p + t - 1 - i] - mean);
        }
        for (j, th) in theta.iter().enumerate() {
            value += th * shocks[q + t - 1 - j];
        }
        w[p + t] = value;
        shocks[q + t] = eps;
    }

    let arma: Vec<f64> = w[p + burn_in..].to_vec();
    let values = integrate_values(&arma, &vec![0.0; order.d]);

    TimeSeries::from_values(
        format!("sim-{seed}"),
        NaiveDate::from_ymd_opt(2020, 1, 1).expect("fixed start date"),
        values,
    )
}
