//! Per-country modelling pipeline: ingest → impute → unit-root test → order
//! identification → fit → diagnostics → forecast → policy verdict.

use chrono::NaiveDate;
use posrate_core::{
    acf, adf_test, fit, forecast, histogram, impute_monthly_mean, ljung_box, residual_metrics,
    select_order, AdfResult, ArimaModel, ArimaOrder, CorrelogramResult, FitMetrics,
    ForecastResult, HistogramData, LjungBoxResult, TimeSeries,
};
use serde::{Deserialize, Serialize};

use crate::config::{OrderMode, PipelineConfig};
use crate::error::Result;
use crate::ingest::{ingest_owid_csv, list_locations};
use crate::policy::{policy_recommendation, PolicyAdvice};

/// Ljung-Box lag count on model residuals (clamped to the residual length).
const LJUNG_BOX_LAGS: usize = 20;
/// Residual correlogram depth for the per-country plot data.
const RESIDUAL_ACF_LAGS: usize = 20;
/// Histogram bin count for the residual distribution plot data.
const HISTOGRAM_BINS: usize = 12;

/// Fitted-model fields that land in the structured report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub order: ArimaOrder,
    pub phi: Vec<f64>,
    pub theta: Vec<f64>,
    pub mean: Option<f64>,
    pub sigma2: f64,
    pub loglik: f64,
    pub aic: f64,
    pub bic_paper: f64,
    pub bic_standard: f64,
    pub n_effective: usize,
}

impl From<&ArimaModel> for ModelSummary {
    fn from(model: &ArimaModel) -> Self {
        Self {
            order: model.order,
            phi: model.phi.clone(),
            theta: model.theta.clone(),
            mean: model.mean,
            sigma2: model.sigma2,
            loglik: model.loglik,
            aic: model.aic,
            bic_paper: model.bic_paper,
            bic_standard: model.bic_standard,
            n_effective: model.n_effective,
        }
    }
}

/// Everything reported for one country: one row of each table plus the
/// forecast band and plot data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryReport {
    pub country: String,
    pub adf: AdfResult,
    pub order: ArimaOrder,
    pub model: ModelSummary,
    pub ljung_box: LjungBoxResult,
    pub metrics: FitMetrics,
    pub forecast: ForecastResult,
    pub policy: PolicyAdvice,
    pub residual_dates: Vec<NaiveDate>,
    pub residuals: Vec<f64>,
    pub residual_acf: CorrelogramResult,
    pub histogram: HistogramData,
}

/// Per-country slot: either a report or the error that stopped it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountryOutcome {
    pub country: String,
    pub report: Option<CountryReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchReport {
    pub reports: Vec<CountryOutcome>,
}

impl BatchReport {
    pub fn failures(&self) -> impl Iterator<Item = (&str, &str)> {
        self.reports.iter().filter_map(|o| {
            o.error
                .as_deref()
                .map(|e| (o.country.as_str(), e))
        })
    }

    pub fn all_succeeded(&self) -> bool {
        self.reports.iter().all(|o| o.report.is_some())
    }
}

/// Runs the whole pipeline for every configured country. Per-country errors
/// are captured in that country's slot; only configuration-level problems
/// abort the batch.
pub fn run_pipeline(config: &PipelineConfig) -> Result<BatchReport> {
    config.validate()?;
    let countries = if config.countries.is_empty() {
        list_locations(&config.input_path)?
    } else {
        config.countries.clone()
    };
    if countries.is_empty() {
        return Err(crate::error::PipelineError::Config(
            "no countries to process".into(),
        ));
    }

    let reports = countries
        .iter()
        .map(|country| match build_country_report(config, country) {
            Ok(report) => CountryOutcome {
                country: country.clone(),
                report: Some(report),
                error: None,
            },
            Err(e) => CountryOutcome {
                country: country.clone(),
                report: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    Ok(BatchReport { reports })
}

fn build_country_report(config: &PipelineConfig, country: &str) -> Result<CountryReport> {
    let raw = ingest_owid_csv(
        &config.input_path,
        country,
        config.date_start,
        config.date_end,
    )?;
    let series = impute_monthly_mean(&raw)?;
    let adf = adf_test(&series, None)?;

    let order = match config.order_mode {
        OrderMode::Fixed(order) => order,
        OrderMode::Auto => select_order(&series, config.caps, config.refine)?.order,
    };
    let model = fit(&series, order, None)?;

    let lb_lags = LJUNG_BOX_LAGS.min(model.residuals.len().saturating_sub(1));
    let ljung = ljung_box(&model.residuals, lb_lags, order.p + order.q)?;
    let metrics = residual_metrics(&model.residuals)?;
    let fc = forecast(&model, &series, config.horizon, config.level)?;
    let policy = policy_recommendation(&fc, config.threshold, config.window)?;

    let residual_dates =
        series.dates()[series.len() - model.residuals.len()..].to_vec();
    let acf_lags = RESIDUAL_ACF_LAGS.min(model.residuals.len().saturating_sub(1));
    let residual_series = TimeSeries::new(
        format!("{country} residuals"),
        residual_dates.clone(),
        model.residuals.clone(),
    )?;
    let residual_acf = acf(&residual_series, acf_lags)?;
    let hist = histogram(&model.residuals, HISTOGRAM_BINS)?;

    Ok(CountryReport {
        country: country.to_string(),
        adf,
        order,
        model: ModelSummary::from(&model),
        ljung_box: ljung,
        metrics,
        forecast: fc,
        policy,
        residual_dates,
        residuals: model.residuals,
        residual_acf,
        histogram: hist,
    })
}
