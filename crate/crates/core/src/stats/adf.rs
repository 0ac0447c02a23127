//! Augmented Dickey–Fuller unit-root test with a constant term.
//!
//! Fits Δx_t = α + ρ·x_{t−1} + Σ β_i·Δx_{t−i} + ε_t by least squares and
//! reads the t-ratio on ρ against embedded finite-sample Dickey–Fuller
//! critical-value tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

/// Deterministic terms included in the test regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegressionKind {
    Constant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdfResult {
    /// t-ratio on the lagged-level coefficient.
    pub statistic: f64,
    /// Interpolated p-value, clamped to [0.01, 0.99].
    pub p_value: f64,
    pub lag_order: usize,
    /// Number of observations entering the regression.
    pub n_used: usize,
    pub regression_kind: RegressionKind,
    /// True when the statistic fell outside the table and the p-value was
    /// clamped to its boundary.
    pub p_clamped: bool,
}

impl AdfResult {
    /// Stationarity read at the conventional 5% cutoff; the boundary p = 0.05
    /// fails to reject the unit root.
    pub fn is_stationary(&self) -> bool {
        self.p_value < 0.05
    }
}

// Finite-sample critical values for the constant-only Dickey-Fuller t
// statistic (Fuller 1976); rows by sample size, columns by level.
const DF_SIZES: [f64; 6] = [25.0, 50.0, 100.0, 250.0, 500.0, 100_000.0];
const DF_LEVELS: [f64; 8] = [0.01, 0.025, 0.05, 0.10, 0.90, 0.95, 0.975, 0.99];
#[rustfmt::skip]
const DF_CRIT: [[f64; 8]; 6] = [
    [-3.75, -3.33, -3.00, -2.63, -0.37,  0.00,  0.34, 0.72],
    [-3.58, -3.22, -2.93, -2.60, -0.40, -0.03,  0.29, 0.66],
    [-3.51, -3.17, -2.89, -2.58, -0.42, -0.05,  0.26, 0.63],
    [-3.46, -3.14, -2.88, -2.57, -0.42, -0.06,  0.24, 0.62],
    [-3.44, -3.13, -2.87, -2.57, -0.43, -0.07,  0.24, 0.61],
    [-3.43, -3.12, -2.86, -2.57, -0.44, -0.07,  0.23, 0.60],
];

/// Default lag order floor((n−1)^(1/3)).
pub fn default_lag_order(n: usize) -> usize {
    let target = (n - 1) as f64;
    let mut k = target.cbrt().floor() as usize;
    // Guard against cbrt landing just below an exact cube.
    while ((k + 1) * (k + 1) * (k + 1)) as f64 <= target {
        k += 1;
    }
    k
}

/// Runs the ADF test; `lag_order` defaults to floor((n−1)^(1/3)).
pub fn adf_test(series: &TimeSeries, lag_order: Option<usize>) -> Result<AdfResult> {
    let x = series.values();
    let n = x.len();
    if n < 10 {
        return Err(Error::InsufficientData { needed: 10, got: n });
    }
    let lags = lag_order.unwrap_or_else(|| default_lag_order(n));
    if n < lags + 10 {
        return Err(Error::InsufficientData {
            needed: lags + 10,
            got: n,
        });
    }

    let dx: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    // Row t regresses dx[t] on [1, x[t], dx[t-1], ..., dx[t-lags]]
    // (dx index t corresponds to the level index t+1).
    let k = lags + 2;
    let rows = dx.len() - lags;
    if rows <= k {
        return Err(Error::InsufficientData {
            needed: 2 * lags + 4,
            got: n,
        });
    }
    let mut design = Vec::with_capacity(rows);
    let mut response = Vec::with_capacity(rows);
    for t in lags..dx.len() {
        let mut row = Vec::with_capacity(k);
        row.push(1.0);
        row.push(x[t]);
        for i in 1..=lags {
            row.push(dx[t - i]);
        }
        design.push(row);
        response.push(dx[t]);
    }

    let ols = least_squares(&design, &response).ok_or_else(|| {
        Error::NumericalDegeneracy("singular design matrix in ADF regression".into())
    })?;
    let sigma2 = ols.rss / (rows - k) as f64;
    let se = (sigma2 * ols.inv_xtx_diag[1]).sqrt();
    if !se.is_finite() || se == 0.0 {
        return Err(Error::NumericalDegeneracy(
            "zero standard error on the lagged level".into(),
        ));
    }
    let statistic = ols.coefficients[1] / se;
    let (p_value, p_clamped) = df_p_value(statistic, rows);

    Ok(AdfResult {
        statistic,
        p_value,
        lag_order: lags,
        n_used: rows,
        regression_kind: RegressionKind::Constant,
        p_clamped,
    })
}

/// Bilinear interpolation into the Dickey–Fuller table: linear across sample
/// size, then linear across significance level, clamped to [0.01, 0.99].
fn df_p_value(statistic: f64, n_used: usize) -> (f64, bool) {
    let n = (n_used as f64).clamp(DF_SIZES[0], DF_SIZES[5]);
    let (lo, hi, w) = bracket(&DF_SIZES, n);
    let crit: Vec<f64> = (0..DF_LEVELS.len())
        .map(|j| DF_CRIT[lo][j] * (1.0 - w) + DF_CRIT[hi][j] * w)
        .collect();

    if statistic <= crit[0] {
        return (DF_LEVELS[0], true);
    }
    if statistic >= crit[crit.len() - 1] {
        return (0.99, true);
    }
    let (lo, hi, w) = bracket(&crit, statistic);
    (DF_LEVELS[lo] * (1.0 - w) + DF_LEVELS[hi] * w, false)
}

/// Indices bracketing `x` in ascending `grid` plus the interpolation weight.
fn bracket(grid: &[f64], x: f64) -> (usize, usize, f64) {
    for i in 0..grid.len() - 1 {
        if x <= grid[i + 1] {
            let span = grid[i + 1] - grid[i];
            let w = if span == 0.0 { 0.0 } else { (x - grid[i]) / span };
            return (i, i + 1, w.clamp(0.0, 1.0));
        }
    }
    (grid.len() - 2, grid.len() - 1, 1.0)
}

struct OlsFit {
    coefficients: Vec<f64>,
    rss: f64,
    /// Diagonal of (X'X)^{-1}, for coefficient standard errors.
    inv_xtx_diag: Vec<f64>,
}

/// Householder QR least squares; None when the design matrix is rank
/// deficient.
fn least_squares(design: &[Vec<f64>], response: &[f64]) -> Option<OlsFit> {
    let m = design.len();
    let k = design[0].len();
    debug_assert!(m >= k);
    let mut a: Vec<Vec<f64>> = design.to_vec();
    let mut y = response.to_vec();

    let scale = a
        .iter()
        .flat_map(|row| row.iter())
        .fold(0.0f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return None;
    }

    for j in 0..k {
        // Householder vector for column j, rows j..m.
        let norm = (j..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if norm < 1e-12 * scale {
            return None;
        }
        let alpha = if a[j][j] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            return None;
        }
        // Apply reflector to remaining columns and the response.
        for col in j..k {
            let dot: f64 = (j..m).map(|i| v[i - j] * a[i][col]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in j..m {
                a[i][col] -= f * v[i - j];
            }
        }
        let dot: f64 = (j..m).map(|i| v[i - j] * y[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in j..m {
            y[i] -= f * v[i - j];
        }
        a[j][j] = alpha;
    }

    // Back substitution on the upper-triangular factor.
    let mut coefficients = vec![0.0; k];
    for j in (0..k).rev() {
        let mut s = y[j];
        for col in j + 1..k {
            s -= a[j][col] * coefficients[col];
        }
        if a[j][j].abs() < 1e-12 * scale {
            return None;
        }
        coefficients[j] = s / a[j][j];
    }
    let rss: f64 = y[k..].iter().map(|r| r * r).sum();

    // (X'X)^{-1}_{jj} = ||R^{-T} e_j||²; forward solve R' w = e_j.
    let mut inv_xtx_diag = vec![0.0; k];
    for j in 0..k {
        let mut w = vec![0.0; k];
        for i in j..k {
            let mut s = if i == j { 1.0 } else { 0.0 };
            for l in j..i {
                s -= a[l][i] * w[l];
            }
            w[i] = s / a[i][i];
        }
        inv_xtx_diag[j] = w.iter().map(|x| x * x).sum();
    }

    Some(OlsFit {
        coefficients,
        rss,
        inv_xtx_diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
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
    fn default_lag_order_cube_root() {
        assert_eq!(default_lag_order(200), 5); // floor(199^(1/3))
        assert_eq!(default_lag_order(126), 5); // exact cube boundary 125
        assert_eq!(default_lag_order(28), 3);
    }

    #[test]
    fn least_squares_recovers_exact_line() {
        let design: Vec<Vec<f64>> = (0..10).map(|i| vec![1.0, i as f64]).collect();
        let response: Vec<f64> = (0..10).map(|i| 2.0 + 3.0 * i as f64).collect();
        let fit = least_squares(&design, &response).expect("full rank");
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-10);
        assert!((fit.coefficients[1] - 3.0).abs() < 1e-10);
        assert!(fit.rss < 1e-18);
    }

    #[test]
    fn least_squares_detects_collinearity() {
        let design: Vec<Vec<f64>> = (0..10).map(|i| vec![1.0, i as f64, 2.0 * i as f64]).collect();
        let response: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!(least_squares(&design, &response).is_none());
    }

    // Deterministic pseudo-noise for the structural tests; the statistical
    // calibration proper lives in the Monte Carlo suites.
    fn hash_noise(n: usize) -> Vec<f64> {
        (0..n as u64)
            .map(|i| ((i.wrapping_mul(2654435761) >> 7) % 1000) as f64 / 1000.0 - 0.5)
            .collect()
    }

    #[test]
    fn random_walk_fails_to_reject() {
        let order = crate::arima::ArimaOrder::new(0, 1, 0).expect("order");
        let walk = crate::diagnostics::simulate_arima(order, &[], &[], 0.0, 1.0, 200, 17)
            .expect("simulate");
        let res = adf_test(&walk, None).expect("adf");
        assert!(res.p_value > 0.05, "p = {}", res.p_value);
    }

    #[test]
    fn white_noise_rejects_unit_root() {
        let res = adf_test(&series(hash_noise(120)), Some(2)).expect("adf");
        assert!(res.p_value < 0.05, "p = {}", res.p_value);
        assert!(res.p_clamped, "white noise lands far beyond the table edge");
    }

    #[test]
    fn affine_invariance_of_statistic() {
        let base = hash_noise(120);
        let shifted: Vec<f64> = base.iter().map(|v| 3.5 * v + 40.0).collect();
        let a = adf_test(&series(base), Some(3)).expect("adf");
        let b = adf_test(&series(shifted), Some(3)).expect("adf");
        assert!((a.statistic - b.statistic).abs() < 1e-9);
    }

    #[test]
    fn constant_series_is_degenerate() {
        let values = vec![5.0; 50];
        assert!(matches!(
            adf_test(&series(values), Some(1)),
            Err(Error::NumericalDegeneracy(_))
        ));
    }

    #[test]
    fn too_short_series_rejected() {
        let values = vec![1.0, 2.0, 3.0];
        assert!(matches!(
            adf_test(&series(values), None),
            Err(Error::InsufficientData { .. })
        ));
    }

    #[test]
    fn p_value_interpolation_brackets() {
        // Statistic exactly at the asymptotic 5% critical value for huge n.
        let (p, clamped) = df_p_value(-2.86, 100_000);
        assert!((p - 0.05).abs() < 1e-12);
        assert!(!clamped);
        // Midway between the 5% and 10% critical values at n = 100.
        let (p, _) = df_p_value(-2.735, 100);
        assert!((p - 0.075).abs() < 1e-3);
        // Outside the table on both sides.
        assert_eq!(df_p_value(-9.0, 100), (0.01, true));
        assert_eq!(df_p_value(4.0, 100), (0.99, true));
    }
}
