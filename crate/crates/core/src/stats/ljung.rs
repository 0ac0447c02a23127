//! Ljung–Box portmanteau test for residual autocorrelation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::sample_acf;
use crate::stats::special::chi2_sf;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LjungBoxResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub lags_used: usize,
    /// Degrees of freedom consumed by the fitted model (p + q for ARIMA
    /// residuals).
    pub fitdf: usize,
}

/// Q = n(n+2) Σ_{k=1..K} ρ̂_k²/(n−k), referred to chi²(K − fitdf).
///
/// A large p-value is evidence the residuals are uncorrelated.
pub fn ljung_box(residuals: &[f64], lags_used: usize, fitdf: usize) -> Result<LjungBoxResult> {
    if lags_used == 0 || lags_used <= fitdf {
        return Err(Error::InvalidDof { lags_used, fitdf });
    }
    let n = residuals.len();
    if n <= lags_used {
        return Err(Error::InsufficientData {
            needed: lags_used + 1,
            got: n,
        });
    }
    let rho = sample_acf(residuals, lags_used).ok_or(Error::DegenerateSeries)?;
    let nf = n as f64;
    let statistic = nf
        * (nf + 2.0)
        * (1..=lags_used)
            .map(|k| rho[k] * rho[k] / (nf - k as f64))
            .sum::<f64>();
    let dof = lags_used - fitdf;
    Ok(LjungBoxResult {
        statistic,
        dof,
        p_value: chi2_sf(statistic, dof),
        lags_used,
        fitdf,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn alternating_residuals_hand_value() {
        // rho_1 = -0.75, so Q = 4 * 6 * 0.5625 / 3 = 4.5.
        let res = ljung_box(&[1.0, -1.0, 1.0, -1.0], 1, 0).expect("ljung-box");
        assert!((res.statistic - 4.5).abs() < 1e-12);
        assert_eq!(res.dof, 1);
        assert!((res.p_value - chi2_sf(4.5, 1)).abs() < 1e-15);
    }

    #[test]
    fn zero_variance_is_degenerate() {
        assert!(matches!(
            ljung_box(&[2.0; 10], 3, 0),
            Err(Error::DegenerateSeries)
        ));
    }

    #[test]
    fn lags_not_exceeding_fitdf_rejected() {
        assert!(matches!(
            ljung_box(&[1.0, 2.0, 0.0, -1.0, 3.0], 2, 2),
            Err(Error::InvalidDof { .. })
        ));
    }

    #[test]
    fn too_few_residuals_rejected() {
        assert!(matches!(
            ljung_box(&[1.0, 2.0, 0.5], 3, 0),
            Err(Error::InsufficientData { .. })
        ));
    }

    proptest! {
        #[test]
        fn q_nondecreasing_in_lags(
            residuals in proptest::collection::vec(-5.0f64..5.0, 30..80),
        ) {
            let mut prev = 0.0;
            for lags in 1..=10 {
                let res = ljung_box(&residuals, lags, 0).expect("ljung-box");
                prop_assert!(res.statistic >= prev - 1e-12);
                prev = res.statistic;
            }
        }
    }
}
