//! Hypothesis tests (ADF unit root, Ljung–Box portmanteau) and the
//! probability special functions behind them.

pub mod adf;
pub mod ljung;
pub mod special;

pub use adf::{adf_test, default_lag_order, AdfResult, RegressionKind};
pub use ljung::{ljung_box, LjungBoxResult};
pub use special::{chi2_sf, norm_cdf, norm_quantile};
