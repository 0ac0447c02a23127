//! h-step-ahead forecasts with prediction intervals from the psi-weight
//! (MA(∞)) expansion, re-integrating differenced models back to the
//! observation scale.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::arima::ArimaModel;
use crate::error::{Error, Result};
use crate::series::{difference_values, integrate_values, TimeSeries};
use crate::stats::special::norm_quantile;

/// Point forecasts with a symmetric prediction band at one confidence level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastResult {
    pub horizons: Vec<usize>,
    pub point: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub level: f64,
    pub origin_date: NaiveDate,
}

impl ForecastResult {
    /// Calendar dates of the forecast horizons (daily cadence).
    pub fn dates(&self) -> Vec<NaiveDate> {
        self.horizons
            .iter()
            .map(|&i| self.origin_date + chrono::Duration::days(i as i64))
            .collect()
    }

    pub fn horizon(&self) -> usize {
        self.point.len()
    }

    pub fn terminal_point(&self) -> f64 {
        *self.point.last().expect("forecast horizon is at least 1")
    }
}

/// Psi weights ψ₀..ψ_{count−1} of the model's MA(∞) representation, with the
/// d-fold differencing operator folded into the AR side so the weights apply
/// to the integrated (observation) scale.
pub fn psi_weights(model: &ArimaModel, count: usize) -> Vec<f64> {
    let phi_star = integrated_ar_coefficients(&model.phi, model.order.d);
    let theta = &model.theta;
    let mut psi = Vec::with_capacity(count);
    if count == 0 {
        return psi;
    }
    psi.push(1.0);
    for j in 1..count {
        let mut w = if j <= theta.len() { theta[j - 1] } else { 0.0 };
        for (i, ph) in phi_star.iter().enumerate().take(j) {
            w += ph * psi[j - 1 - i];
        }
        psi.push(w);
    }
    psi
}

/// AR coefficients φ' of (1 − Σφ_i z^i)(1 − z)^d = 1 − Σφ'_i z^i.
fn integrated_ar_coefficients(phi: &[f64], d: usize) -> Vec<f64> {
    let mut poly = vec![1.0];
    poly.extend(phi.iter().map(|p| -p));
    for _ in 0..d {
        let mut next = vec![0.0; poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c;
            next[i + 1] -= c;
        }
        poly = next;
    }
    poly[1..].iter().map(|c| -c).collect()
}

/// Forecasts `h` steps beyond the end of `history` with a two-sided
/// prediction band at `level` (e.g. 0.80). Point forecasts run the ARMA
/// recursion on the differenced scale with future shocks at zero, then
/// re-integrate using the last d observations; the band at horizon i is
/// ±z·σ̂·√(Σ_{j<i} ψ_j²) around the point.
pub fn forecast(
    model: &ArimaModel,
    history: &TimeSeries,
    h: usize,
    level: f64,
) -> Result<ForecastResult> {
    if h == 0 {
        return Err(Error::DomainError("forecast horizon must be positive".into()));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::DomainError(format!(
            "confidence level must lie in (0, 1), got {level}"
        )));
    }
    let p = model.order.p;
    let d = model.order.d;
    if history.len() < d + p + 1 {
        return Err(Error::InsufficientData {
            needed: d + p + 1,
            got: history.len(),
        });
    }

    let w = difference_values(history.values(), d);
    let m = w.len();
    let mu = model.mean_value();
    // Shock at differenced-scale index t: zero before the recursion starts,
    // the fitted residual afterwards, zero in the future.
    let shock = |t: usize| -> f64 {
        if t < p {
            0.0
        } else {
            model.residuals.get(t - p).copied().unwrap_or(0.0)
        }
    };

    let mut extended = w;
    let mut diff_forecasts = Vec::with_capacity(h);
    for step in 0..h {
        let t = m + step;
        let mut value = mu;
        for (j, ph) in model.phi.iter().enumerate() {
            value += ph * (extended[t - 1 - j] - mu);
        }
        for (j, th) in model.theta.iter().enumerate() {
            if t > j {
                let idx = t - 1 - j;
                if idx < m {
                    value += th * shock(idx);
                }
            }
        }
        extended.push(value);
        diff_forecasts.push(value);
    }

    let pivots = &history.values()[history.len() - d..];
    let point = integrate_values(&diff_forecasts, pivots);

    let psi = psi_weights(model, h);
    let z = norm_quantile((1.0 + level) / 2.0)?;
    let sigma = model.sigma2.sqrt();
    let mut cumulative = 0.0;
    let mut lower = Vec::with_capacity(h);
    let mut upper = Vec::with_capacity(h);
    for (i, pt) in point.iter().enumerate() {
        cumulative += psi[i] * psi[i];
        let half_width = z * sigma * cumulative.sqrt();
        lower.push(pt - half_width);
        upper.push(pt + half_width);
    }

    Ok(ForecastResult {
        horizons: (1..=h).collect(),
        point,
        lower,
        upper,
        level,
        origin_date: history.last_date(),
    })
}
