//! Box–Jenkins ARIMA toolkit for epidemic test-positivity time series:
//! stationarity testing, order identification from correlograms,
//! conditional-least-squares estimation, residual diagnostics and h-step
//! forecasting with prediction intervals.
//!
//! Everything is a pure function over immutable inputs; the only randomness
//! lives in [`diagnostics::simulate_arima`], which draws from a seeded
//! ChaCha8 generator and is bit-reproducible across platforms.

pub mod arima;
pub mod diagnostics;
pub mod error;
pub mod forecasting;
pub mod series;
pub mod stats;

pub use arima::{
    css_objective, fit, information_criteria, min_root_magnitude, select_order, ArimaModel,
    ArimaOrder, OrderSelection,
};
pub use diagnostics::{histogram, residual_metrics, simulate_arima, FitMetrics, HistogramData};
pub use error::{Error, Result};
pub use forecasting::{forecast, psi_weights, ForecastResult};
pub use series::{
    acf, difference, impute_monthly_mean, integrate, pacf, CorrelogramResult, RawSeries,
    TimeSeries,
};
pub use stats::{adf_test, chi2_sf, ljung_box, norm_cdf, norm_quantile, AdfResult, LjungBoxResult};
