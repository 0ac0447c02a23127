//! ARIMA estimation by conditional least squares, information criteria and
//! automatic order identification from correlograms.

pub mod optim;
pub mod poly;
pub mod transform;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{acf, difference, difference_values, pacf, CorrelogramResult, TimeSeries};
use crate::stats::adf::adf_test;

pub use poly::min_root_magnitude;
pub use transform::{from_invertible, from_stationary, is_invertible, is_stationary,
    to_invertible, to_stationary};

/// Hard caps on the model orders accepted anywhere in the crate.
pub const MAX_P: usize = 12;
pub const MAX_Q: usize = 12;
pub const MAX_D: usize = 3;

/// The (p, d, q) order triple of a non-seasonal ARIMA model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArimaOrder {
    pub p: usize,
    pub d: usize,
    pub q: usize,
}

impl ArimaOrder {
    pub fn new(p: usize, d: usize, q: usize) -> Result<Self> {
        if p > MAX_P || q > MAX_Q || d > MAX_D {
            return Err(Error::InvalidOrder(format!(
                "order ({p},{d},{q}) exceeds caps ({MAX_P},{MAX_D},{MAX_Q})"
            )));
        }
        Ok(Self { p, d, q })
    }
}

impl std::fmt::Display for ArimaOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.p, self.d, self.q)
    }
}

/// A fitted ARIMA model on the differenced scale.
#[derive(Debug, Clone, PartialEq)]
pub struct ArimaModel {
    pub order: ArimaOrder,
    /// AR coefficients φ₁..φ_p of 1 − φ₁z − … − φ_p z^p.
    pub phi: Vec<f64>,
    /// MA coefficients θ₁..θ_q of 1 + θ₁z + … + θ_q z^q.
    pub theta: Vec<f64>,
    /// Intercept of the differenced series, when estimated.
    pub mean: Option<f64>,
    /// Innovation variance σ² = CSS / n_effective.
    pub sigma2: f64,
    /// Gaussian log-likelihood at the CSS optimum.
    pub loglik: f64,
    pub aic: f64,
    /// −2 ln L + 2 ln(N) k.
    pub bic_paper: f64,
    /// −2 ln L + ln(N) k.
    pub bic_standard: f64,
    pub n_effective: usize,
    /// One-step-ahead residuals, aligned with the trailing n_effective
    /// observations of the differenced series.
    pub residuals: Vec<f64>,
}

impl ArimaModel {
    pub fn mean_value(&self) -> f64 {
        self.mean.unwrap_or(0.0)
    }

    /// Number of estimated parameters k = p + q + mean + 1 (σ² included).
    pub fn param_count(&self) -> usize {
        self.order.p + self.order.q + usize::from(self.mean.is_some()) + 1
    }

    /// Coefficients of 1 − φ₁z − … − φ_p z^p.
    pub fn ar_polynomial(&self) -> Vec<f64> {
        let mut c = vec![1.0];
        c.extend(self.phi.iter().map(|p| -p));
        c
    }

    /// Coefficients of 1 + θ₁z + … + θ_q z^q.
    pub fn ma_polynomial(&self) -> Vec<f64> {
        let mut c = vec![1.0];
        c.extend_from_slice(&self.theta);
        c
    }
}

/// Conditional sum of squares of the ARMA residual recursion
/// e_t = w̃_t − Σφ_i·w̃_{t−i} − Σθ_j·e_{t−j} (w̃ = w − μ), with zero
/// pre-sample residuals and summation starting at t = p + 1.
pub fn css_objective(phi: &[f64], theta: &[f64], mean: f64, series: &TimeSeries) -> f64 {
    css_on_values(phi, theta, mean, series.values())
}

pub(crate) fn css_on_values(phi: &[f64], theta: &[f64], mean: f64, w: &[f64]) -> f64 {
    css_residuals(phi, theta, mean, w).iter().map(|e| e * e).sum()
}

pub(crate) fn css_residuals(phi: &[f64], theta: &[f64], mean: f64, w: &[f64]) -> Vec<f64> {
    let p = phi.len();
    let m = w.len();
    if m <= p {
        return Vec::new();
    }
    let mut shocks = vec![0.0; m];
    let mut out = Vec::with_capacity(m - p);
    for t in p..m {
        let mut pred = 0.0;
        for (i, ph) in phi.iter().enumerate() {
            pred += ph * (w[t - 1 - i] - mean);
        }
        for (j, th) in theta.iter().enumerate() {
            if t > j {
                pred += th * shocks[t - 1 - j];
            }
        }
        let e = (w[t] - mean) - pred;
        shocks[t] = e;
        out.push(e);
    }
    out
}

fn criteria_from(loglik: f64, k: usize, n_effective: usize) -> (f64, f64, f64) {
    let k = k as f64;
    let ln_n = (n_effective as f64).ln();
    let deviance = -2.0 * loglik;
    (
        deviance + 2.0 * k,
        deviance + 2.0 * ln_n * k,
        deviance + ln_n * k,
    )
}

/// (aic, bic_paper, bic_standard) recomputed from the fitted model, with
/// k = p + q + mean + 1 and N = n_effective.
pub fn information_criteria(model: &ArimaModel) -> (f64, f64, f64) {
    criteria_from(model.loglik, model.param_count(), model.n_effective)
}

/// Fits an ARIMA model by minimizing the conditional sum of squares over the
/// stationary/invertible region. `include_mean` defaults to `d == 0`.
pub fn fit(series: &TimeSeries, order: ArimaOrder, include_mean: Option<bool>) -> Result<ArimaModel> {
    let ArimaOrder { p, d, q } = order;
    let needed = d + p + q + 10;
    if series.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: series.len(),
        });
    }
    let w = difference_values(series.values(), d);
    let include_mean = include_mean.unwrap_or(d == 0);
    let w_mean = w.iter().sum::<f64>() / w.len() as f64;

    let (phi, theta, mean) = if p == 0 && q == 0 {
        // No recursion to optimize; the CSS-optimal intercept is the mean.
        (Vec::new(), Vec::new(), if include_mean { w_mean } else { 0.0 })
    } else {
        let dim = p + q + usize::from(include_mean);
        let mut origin = vec![0.0; dim];
        let mut steps = vec![0.5; dim];
        if include_mean {
            origin[dim - 1] = w_mean;
            let sd =
                (w.iter().map(|v| (v - w_mean).powi(2)).sum::<f64>() / w.len() as f64).sqrt();
            steps[dim - 1] = 0.1 * sd + 1e-4;
        }
        let unpack = |x: &[f64]| {
            (
                to_stationary(&x[..p]),
                to_invertible(&x[p..p + q]),
                if include_mean { x[p + q] } else { 0.0 },
            )
        };
        let outcome = optim::nelder_mead(
            |x| {
                let (phi, theta, mu) = unpack(x);
                css_on_values(&phi, &theta, mu, &w)
            },
            &origin,
            &steps,
            1e-10,
            2000 * (p + q + 1),
        );
        let (phi, theta, mu) = unpack(&outcome.point);
        if !outcome.converged {
            return Err(Error::ConvergenceFailure {
                phi,
                theta,
                mean: mu,
                objective: outcome.objective,
                evaluations: outcome.evaluations,
            });
        }
        (phi, theta, mu)
    };

    let residuals = css_residuals(&phi, &theta, mean, &w);
    let n_effective = residuals.len();
    let css: f64 = residuals.iter().map(|e| e * e).sum();
    let sigma2 = (css / n_effective as f64).max(f64::MIN_POSITIVE);
    let loglik = -0.5 * n_effective as f64 * ((2.0 * PI).ln() + sigma2.ln() + 1.0);
    let k = p + q + usize::from(include_mean) + 1;
    let (aic, bic_paper, bic_standard) = criteria_from(loglik, k, n_effective);

    Ok(ArimaModel {
        order,
        phi,
        theta,
        mean: include_mean.then_some(mean),
        sigma2,
        loglik,
        aic,
        bic_paper,
        bic_standard,
        n_effective,
        residuals,
    })
}

/// Outcome of automatic order identification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSelection {
    pub order: ArimaOrder,
    /// False when no differencing level up to the cap passed the ADF test
    /// and d was forced to the cap.
    pub stationarity_achieved: bool,
    /// True when the AIC neighborhood search adjusted (p, q).
    pub refined: bool,
}

/// Box–Jenkins identification: d is the smallest differencing order whose
/// ADF p-value drops below 0.05, p the largest PACF lag outside the
/// confidence band, q the largest such ACF lag. With `refine`, the ±1
/// neighborhood of (p, q) is searched for the minimum-AIC fit.
pub fn select_order(series: &TimeSeries, caps: ArimaOrder, refine: bool) -> Result<OrderSelection> {
    let mut chosen_d = caps.d;
    let mut achieved = false;
    for d in 0..=caps.d {
        let diffed = difference(series, d)?;
        let result = adf_test(&diffed, None)?;
        if result.p_value < 0.05 {
            chosen_d = d;
            achieved = true;
            break;
        }
    }

    let work = difference(series, chosen_d)?;
    let p = if caps.p == 0 {
        0
    } else {
        largest_significant(&pacf(&work, caps.p)?)
    };
    let q = if caps.q == 0 {
        0
    } else {
        largest_significant(&acf(&work, caps.q)?)
    };
    let base = ArimaOrder::new(p, chosen_d, q)?;

    if !refine {
        return Ok(OrderSelection {
            order: base,
            stationarity_achieved: achieved,
            refined: false,
        });
    }

    let mut best: Option<(f64, ArimaOrder)> = None;
    for cand_p in p.saturating_sub(1)..=(p + 1).min(caps.p) {
        for cand_q in q.saturating_sub(1)..=(q + 1).min(caps.q) {
            let order = ArimaOrder::new(cand_p, chosen_d, cand_q)?;
            if let Ok(model) = fit(series, order, None) {
                if best.map_or(true, |(aic, _)| model.aic < aic) {
                    best = Some((model.aic, order));
                }
            }
        }
    }
    match best {
        Some((_, order)) => Ok(OrderSelection {
            order,
            stationarity_achieved: achieved,
            refined: order != base,
        }),
        None => Ok(OrderSelection {
            order: base,
            stationarity_achieved: achieved,
            refined: false,
        }),
    }
}

/// Largest lag ≥ 1 whose coefficient exceeds the confidence band in
/// absolute value; 0 when none does.
fn largest_significant(correlogram: &CorrelogramResult) -> usize {
    correlogram
        .lags
        .iter()
        .zip(&correlogram.coefficients)
        .filter(|(lag, coef)| **lag >= 1 && coef.abs() > correlogram.confidence_bound)
        .map(|(lag, _)| *lag)
        .max()
        .unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::simulate_arima;
    use chrono::NaiveDate;

    fn series(values: Vec<f64>) -> TimeSeries {
        TimeSeries::from_values(
            "test",
            NaiveDate::from_ymd_opt(2020, 4, 1).expect("date"),
            values,
        )
        .expect("series")
    }

    #[test]
    fn order_caps_enforced() {
        assert!(ArimaOrder::new(12, 3, 12).is_ok());
        assert!(matches!(
            ArimaOrder::new(13, 0, 0),
            Err(Error::InvalidOrder(_))
        ));
        assert!(ArimaOrder::new(0, 4, 0).is_err());
    }

    #[test]
    fn css_white_noise_is_sum_of_squares() {
        let s = series(vec![1.0, 2.0, 1.0]);
        assert_eq!(css_objective(&[], &[], 0.0, &s), 6.0);
    }

    #[test]
    fn css_ar1_hand_recursion() {
        let s = series(vec![1.0, 2.0, 1.0]);
        let css = css_objective(&[0.5], &[], 0.0, &s);
        assert!((css - 2.25).abs() < 1e-12);
    }

    #[test]
    fn css_ma1_hand_recursion() {
        let s = series(vec![1.0, 0.0]);
        let css = css_objective(&[], &[0.5], 0.0, &s);
        assert!((css - 1.25).abs() < 1e-12);
    }

    #[test]
    fn criteria_trivial_arithmetic() {
        let (aic, _, _) = criteria_from(-10.0, 3, 100);
        assert!((aic - 26.0).abs() < 1e-9);
        // ln N = 2 → bic_paper = 20 + 2·2·3 = 32.
        let n = std::f64::consts::E.powi(2);
        let (_, bic_paper, _) = criteria_from(-10.0, 3, n.round() as usize);
        let ln_n = (n.round() as f64).ln();
        assert!((bic_paper - (20.0 + 2.0 * ln_n * 3.0)).abs() < 1e-9);
        let (_, _, bic_standard) = criteria_from(-10.0, 3, 100);
        assert!((bic_standard - 33.815510557964274).abs() < 1e-9);
    }

    #[test]
    fn criteria_increase_with_k() {
        for k in 1..10 {
            let a = criteria_from(-10.0, k, 50);
            let b = criteria_from(-10.0, k + 1, 50);
            assert!(b.0 > a.0 && b.1 > a.1 && b.2 > a.2);
        }
    }

    #[test]
    fn random_walk_fit_has_no_coefficients() {
        let values: Vec<f64> = (0..40).map(|i| (i as f64 * 0.7).sin() * 3.0 + i as f64).collect();
        let order = ArimaOrder::new(0, 1, 0).expect("order");
        let model = fit(&series(values.clone()), order, None).expect("fit");
        assert!(model.phi.is_empty() && model.theta.is_empty());
        assert_eq!(model.mean, None);
        let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let expected = diffs.iter().map(|d| d * d).sum::<f64>() / diffs.len() as f64;
        assert!((model.sigma2 - expected).abs() < 1e-12);
        assert_eq!(model.n_effective, diffs.len());
    }

    #[test]
    fn fit_recovers_ar1_coefficient() {
        let order = ArimaOrder::new(1, 0, 0).expect("order");
        let data = simulate_arima(order, &[0.7], &[], 0.0, 1.0, 1000, 42).expect("simulate");
        let model = fit(&data, order, None).expect("fit");
        assert!(
            (0.55..=0.85).contains(&model.phi[0]),
            "phi = {}",
            model.phi[0]
        );
        assert!(model.sigma2 > 0.0);
    }

    #[test]
    fn fit_objective_never_worse_than_zero_start() {
        let order = ArimaOrder::new(1, 0, 1).expect("order");
        let data = simulate_arima(order, &[0.5], &[0.3], 0.0, 1.0, 300, 7).expect("simulate");
        let model = fit(&data, order, None).expect("fit");
        let at_origin = css_on_values(&[], &[], model.mean_value(), data.values());
        let at_fit = css_on_values(&model.phi, &model.theta, model.mean_value(), data.values());
        assert!(at_fit <= at_origin);
    }

    #[test]
    fn fit_shift_equivariance() {
        let order = ArimaOrder::new(1, 0, 0).expect("order");
        let data = simulate_arima(order, &[0.6], &[], 5.0, 1.0, 400, 11).expect("simulate");
        let shifted = series(data.values().iter().map(|v| v + 100.0).collect());
        let a = fit(&data, order, Some(true)).expect("fit");
        let b = fit(&shifted, order, Some(true)).expect("fit");
        assert!((a.phi[0] - b.phi[0]).abs() < 1e-6);
        assert!((a.sigma2 - b.sigma2).abs() < 1e-6 * a.sigma2.max(1.0));
        assert!((b.mean_value() - a.mean_value() - 100.0).abs() < 1e-6);
    }

    #[test]
    fn fitted_polynomials_have_roots_outside_unit_circle() {
        let order = ArimaOrder::new(2, 0, 1).expect("order");
        let data =
            simulate_arima(order, &[0.5, 0.2], &[0.4], 0.0, 1.0, 500, 3).expect("simulate");
        let model = fit(&data, order, None).expect("fit");
        assert!(min_root_magnitude(&model.ar_polynomial()) > 1.0 + 1e-8);
        assert!(min_root_magnitude(&model.ma_polynomial()) > 1.0 + 1e-8);
    }

    #[test]
    fn fit_insufficient_data() {
        let order = ArimaOrder::new(2, 1, 2).expect("order");
        assert!(matches!(
            fit(&series(vec![1.0; 12]), order, None),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn select_order_white_noise_is_000() {
        let order = ArimaOrder::new(0, 0, 0).expect("order");
        let data = simulate_arima(order, &[], &[], 0.0, 1.0, 300, 20).expect("simulate");
        let caps = ArimaOrder::new(5, 2, 5).expect("caps");
        let sel = select_order(&data, caps, false).expect("select");
        assert_eq!(sel.order, order);
        assert!(sel.stationarity_achieved);
    }

    #[test]
    fn select_order_random_walk_needs_differencing() {
        let order = ArimaOrder::new(0, 1, 0).expect("order");
        let data = simulate_arima(order, &[], &[], 0.0, 1.0, 300, 21).expect("simulate");
        let caps = ArimaOrder::new(5, 2, 5).expect("caps");
        let sel = select_order(&data, caps, false).expect("select");
        assert!(sel.order.d >= 1, "selected {:?}", sel.order);
    }

    #[test]
    fn select_order_ar1_finds_autoregression() {
        let order = ArimaOrder::new(1, 0, 0).expect("order");
        let data = simulate_arima(order, &[0.8], &[], 0.0, 1.0, 600, 22).expect("simulate");
        let caps = ArimaOrder::new(5, 2, 5).expect("caps");
        let sel = select_order(&data, caps, false).expect("select");
        assert_eq!(sel.order.d, 0);
        assert!(sel.order.p >= 1);
    }
}
