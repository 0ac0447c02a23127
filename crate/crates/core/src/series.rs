//! Time-series containers, differencing/integration, monthly-mean imputation
//! and the sample (partial) autocorrelation machinery.
//!
//! Series are treated as equally spaced by index; dates are carried along as
//! labels and calendar gaps are permitted.

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered sequence of dated observations with no missing values.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    name: String,
    dates: Vec<NaiveDate>,
    values: Vec<f64>,
}

impl TimeSeries {
    /// Builds a series, enforcing strictly increasing dates and equal,
    /// non-empty date/value lengths.
    pub fn new(name: impl Into<String>, dates: Vec<NaiveDate>, values: Vec<f64>) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: dates.len(),
                got: values.len(),
            });
        }
        if dates.is_empty() {
            return Err(Error::InvalidSeries("series must not be empty".into()));
        }
        if dates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSeries(
                "dates must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            dates,
            values,
        })
    }

    /// Convenience constructor generating consecutive daily dates from `start`.
    pub fn from_values(name: impl Into<String>, start: NaiveDate, values: Vec<f64>) -> Result<Self> {
        let dates = (0..values.len() as i64)
            .map(|i| start + chrono::Duration::days(i))
            .collect();
        Self::new(name, dates, values)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
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

    pub fn last_date(&self) -> NaiveDate {
        *self.dates.last().expect("series is never empty")
    }

    pub fn last_value(&self) -> f64 {
        *self.values.last().expect("series is never empty")
    }
}

/// A dated series that may contain missing observations.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSeries {
    name: String,
    dates: Vec<NaiveDate>,
    values: Vec<Option<f64>>,
}

impl RawSeries {
    pub fn new(
        name: impl Into<String>,
        dates: Vec<NaiveDate>,
        values: Vec<Option<f64>>,
    ) -> Result<Self> {
        if dates.len() != values.len() {
            return Err(Error::DimensionMismatch {
                expected: dates.len(),
                got: values.len(),
            });
        }
        if dates.is_empty() {
            return Err(Error::InvalidSeries("series must not be empty".into()));
        }
        if dates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSeries(
                "dates must be strictly increasing".into(),
            ));
        }
        Ok(Self {
            name: name.into(),
            dates,
            values,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }
}

/// Sample (partial) autocorrelations over a range of lags, with the
/// significance band used to read the correlogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelogramResult {
    pub lags: Vec<usize>,
    pub coefficients: Vec<f64>,
    /// Coefficients beyond `±confidence_bound` are read as significant.
    pub confidence_bound: f64,
}

impl CorrelogramResult {
    /// Coefficient at `lag`, if that lag was computed.
    pub fn at(&self, lag: usize) -> Option<f64> {
        self.lags
            .iter()
            .position(|&l| l == lag)
            .map(|i| self.coefficients[i])
    }
}

/// d-th order difference; output keeps the trailing dates of the input.
pub fn difference(series: &TimeSeries, d: usize) -> Result<TimeSeries> {
    if series.len() <= d {
        return Err(Error::InsufficientData {
            needed: d + 1,
            got: series.len(),
        });
    }
    let values = difference_values(series.values(), d);
    let dates = series.dates()[d..].to_vec();
    TimeSeries::new(series.name(), dates, values)
}

pub(crate) fn difference_values(values: &[f64], d: usize) -> Vec<f64> {
    let mut out = values.to_vec();
    for _ in 0..d {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    out
}

/// Undoes d-th order differencing. `pivots` holds the d original-scale values
/// immediately preceding the first entry of `diffs`, in chronological order:
/// the first d values of the undifferenced series for a round trip, or the
/// last d observations of history when re-integrating forecasts.
pub fn integrate(diffs: &TimeSeries, d: usize, pivots: &[f64]) -> Result<TimeSeries> {
    if pivots.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: pivots.len(),
        });
    }
    let values = integrate_values(diffs.values(), pivots);
    TimeSeries::new(diffs.name(), diffs.dates().to_vec(), values)
}

pub(crate) fn integrate_values(diffs: &[f64], pivots: &[f64]) -> Vec<f64> {
    let d = pivots.len();
    if d == 0 {
        return diffs.to_vec();
    }
    // Last value of each difference level of the pivot block: level 0 is the
    // final pivot itself, level j the final j-th difference of the pivots.
    let mut level_last = Vec::with_capacity(d);
    let mut tower = pivots.to_vec();
    for _ in 0..d {
        level_last.push(*tower.last().expect("pivot tower is non-empty"));
        tower = tower.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let mut current = diffs.to_vec();
    for level in (0..d).rev() {
        let mut prev = level_last[level];
        for v in current.iter_mut() {
            prev += *v;
            *v = prev;
        }
    }
    current
}

fn month_key(date: NaiveDate) -> (i32, u32) {
    (date.year(), date.month())
}

/// Replaces each missing value by the mean of the observed values within the
/// same calendar month (same year and month). Observed values pass through.
pub fn impute_monthly_mean(raw: &RawSeries) -> Result<TimeSeries> {
    let mut filled = Vec::with_capacity(raw.len());
    for (i, value) in raw.values().iter().enumerate() {
        match value {
            Some(v) => filled.push(*v),
            None => {
                let key = month_key(raw.dates()[i]);
                let observed: Vec<f64> = raw
                    .values()
                    .iter()
                    .zip(raw.dates())
                    .filter(|(v, date)| v.is_some() && month_key(**date) == key)
                    .map(|(v, _)| v.expect("filtered on is_some"))
                    .collect();
                if observed.is_empty() {
                    return Err(Error::ImputationImpossible {
                        month: format!("{:04}-{:02}", key.0, key.1),
                    });
                }
                filled.push(observed.iter().sum::<f64>() / observed.len() as f64);
            }
        }
    }
    TimeSeries::new(raw.name(), raw.dates().to_vec(), filled)
}

/// Biased (1/n) sample autocovariances at lags 0..=max_lag.
fn autocovariances(values: &[f64], max_lag: usize) -> Vec<f64> {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = values.iter().map(|v| v - mean).collect();
    (0..=max_lag)
        .map(|k| {
            let s: f64 = (0..n - k).map(|t| dev[t] * dev[t + k]).sum();
            s / n as f64
        })
        .collect()
}

/// Sample autocorrelations rho_0..rho_max_lag, or None when the series has
/// zero sample variance.
pub(crate) fn sample_acf(values: &[f64], max_lag: usize) -> Option<Vec<f64>> {
    let gamma = autocovariances(values, max_lag);
    if gamma[0] == 0.0 {
        return None;
    }
    Some(gamma.iter().map(|g| g / gamma[0]).collect())
}

/// Sample autocorrelation function at lags 0..=max_lag with the fixed-width
/// significance band ±1.96/√n.
pub fn acf(series: &TimeSeries, max_lag: usize) -> Result<CorrelogramResult> {
    if max_lag == 0 {
        return Err(Error::DomainError("max_lag must be positive".into()));
    }
    if series.len() <= max_lag {
        return Err(Error::InsufficientData {
            needed: max_lag + 1,
            got: series.len(),
        });
    }
    let coefficients = sample_acf(series.values(), max_lag).ok_or(Error::DegenerateSeries)?;
    Ok(CorrelogramResult {
        lags: (0..=max_lag).collect(),
        coefficients,
        confidence_bound: 1.96 / (series.len() as f64).sqrt(),
    })
}

/// Partial autocorrelations at lags 1..=max_lag via the Durbin–Levinson
/// recursion on the sample ACF.
pub fn pacf(series: &TimeSeries, max_lag: usize) -> Result<CorrelogramResult> {
    if max_lag == 0 {
        return Err(Error::DomainError("max_lag must be positive".into()));
    }
    if series.len() <= max_lag + 1 {
        return Err(Error::InsufficientData {
            needed: max_lag + 2,
            got: series.len(),
        });
    }
    let rho = sample_acf(series.values(), max_lag).ok_or(Error::DegenerateSeries)?;
    let partials = durbin_levinson(&rho, max_lag)?;
    Ok(CorrelogramResult {
        lags: (1..=max_lag).collect(),
        coefficients: partials,
        confidence_bound: 1.96 / (series.len() as f64).sqrt(),
    })
}

/// Durbin–Levinson: returns phi_kk for k = 1..=max_lag given rho_0..rho_max.
fn durbin_levinson(rho: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let mut partials = Vec::with_capacity(max_lag);
    // phi holds the order-k AR coefficients phi_{k,1..k}.
    let mut phi = vec![rho[1]];
    partials.push(rho[1]);
    check_pivot(rho[1])?;
    for k in 2..=max_lag {
        let num = rho[k] - (0..k - 1).map(|j| phi[j] * rho[k - 1 - j]).sum::<f64>();
        let den = 1.0 - (0..k - 1).map(|j| phi[j] * rho[j + 1]).sum::<f64>();
        if den <= 0.0 {
            return Err(Error::NumericalDegeneracy(format!(
                "Durbin-Levinson innovation variance ratio {den} <= 0 at lag {k}"
            )));
        }
        let phi_kk = num / den;
        check_pivot(phi_kk)?;
        let mut next = Vec::with_capacity(k);
        for j in 0..k - 1 {
            next.push(phi[j] - phi_kk * phi[k - 2 - j]);
        }
        next.push(phi_kk);
        phi = next;
        partials.push(phi_kk);
    }
    Ok(partials)
}

fn check_pivot(phi_kk: f64) -> Result<()> {
    if phi_kk.abs() >= 1.0 {
        Err(Error::NumericalDegeneracy(format!(
            "partial autocorrelation {phi_kk} hit the unit circle"
        )))
    } else {
        Ok(())
    }
}
