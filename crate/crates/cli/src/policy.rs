//! WHO-threshold policy reading of a positivity forecast: relaxation needs
//! the full observation window at or below the threshold.

use posrate_core::ForecastResult;
use serde::{Deserialize, Serialize};

use crate::error::{PipelineError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Relax,
    Maintain,
    Tighten,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Verdict::Relax => "relax",
            Verdict::Maintain => "maintain",
            Verdict::Tighten => "tighten",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Rising,
    Falling,
    Flat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicyAdvice {
    pub verdict: Verdict,
    /// Length of the trailing run of sub-threshold forecasts within the
    /// observation window.
    pub days_below_threshold: usize,
    /// Factor by which testing must grow to pull the terminal forecast to
    /// the threshold, assuming the positive count stays constant; 1 when no
    /// increase is needed.
    pub required_test_multiplier: f64,
    pub trend: Trend,
}

/// Reads the first `window` forecast days against `threshold` (percent).
/// The boundary value counts as passing ("threshold or lesser"). Relaxation
/// requires the whole window to pass; a terminal forecast above the
/// threshold that is not falling calls for tighter measures and more
/// testing; anything else holds the line.
pub fn policy_recommendation(
    forecast: &ForecastResult,
    threshold: f64,
    window: usize,
) -> Result<PolicyAdvice> {
    if window == 0 {
        return Err(PipelineError::Core(posrate_core::Error::DomainError(
            "observation window must be positive".into(),
        )));
    }
    if forecast.horizon() < window {
        return Err(PipelineError::Core(posrate_core::Error::DomainError(
            format!(
                "forecast horizon {} shorter than the {window}-day window",
                forecast.horizon()
            ),
        )));
    }

    let days_below_threshold = forecast.point[..window]
        .iter()
        .rev()
        .take_while(|p| **p <= threshold)
        .count();

    let first = forecast.point[0];
    let terminal = forecast.terminal_point();
    let trend = if (terminal - first).abs() <= 1e-9 {
        Trend::Flat
    } else if terminal > first {
        Trend::Rising
    } else {
        Trend::Falling
    };

    let verdict = if days_below_threshold == window {
        Verdict::Relax
    } else if terminal > threshold && trend != Trend::Falling {
        Verdict::Tighten
    } else {
        Verdict::Maintain
    };

    Ok(PolicyAdvice {
        verdict,
        days_below_threshold,
        required_test_multiplier: (terminal / threshold).max(1.0),
        trend,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;

    fn forecast(points: Vec<f64>) -> ForecastResult {
        let h = points.len();
        ForecastResult {
            horizons: (1..=h).collect(),
            lower: points.iter().map(|p| p - 1.0).collect(),
            upper: points.iter().map(|p| p + 1.0).collect(),
            point: points,
            level: 0.8,
            origin_date: NaiveDate::from_ymd_opt(2020, 9, 12).expect("date"),
        }
    }

    #[test]
    fn steady_low_rate_relaxes() {
        let advice = policy_recommendation(&forecast(vec![4.8; 30]), 5.0, 14).expect("policy");
        assert_eq!(advice.verdict, Verdict::Relax);
        assert_eq!(advice.days_below_threshold, 14);
        assert_eq!(advice.required_test_multiplier, 1.0);
        assert_eq!(advice.trend, Trend::Flat);
    }

    #[test]
    fn boundary_rate_counts_as_passing() {
        let advice = policy_recommendation(&forecast(vec![5.0; 30]), 5.0, 14).expect("policy");
        assert_eq!(advice.verdict, Verdict::Relax);
        assert_eq!(advice.days_below_threshold, 14);
    }

    #[test]
    fn rising_high_rate_tightens_with_multiplier() {
        let points: Vec<f64> = (0..30).map(|i| 20.0 + i as f64).collect();
        let advice = policy_recommendation(&forecast(points), 5.0, 14).expect("policy");
        assert_eq!(advice.verdict, Verdict::Tighten);
        assert_eq!(advice.trend, Trend::Rising);
        assert!((advice.required_test_multiplier - 49.0 / 5.0).abs() < 1e-12);
    }

    #[test]
    fn flat_high_rate_also_tightens() {
        let advice = policy_recommendation(&forecast(vec![50.0; 30]), 5.0, 14).expect("policy");
        assert_eq!(advice.verdict, Verdict::Tighten);
        assert_eq!(advice.trend, Trend::Flat);
        assert_eq!(advice.required_test_multiplier, 10.0);
    }

    #[test]
    fn falling_but_still_high_maintains() {
        let points: Vec<f64> = (0..30).map(|i| 12.0 - 0.1 * i as f64).collect();
        let advice = policy_recommendation(&forecast(points), 5.0, 14).expect("policy");
        assert_eq!(advice.verdict, Verdict::Maintain);
        assert_eq!(advice.trend, Trend::Falling);
        assert!(advice.required_test_multiplier > 1.0);
    }

    #[test]
    fn partial_window_run_counted_from_the_end() {
        // Dips below only for the last 3 days of the window.
        let mut points = vec![7.0; 30];
        for p in points.iter_mut().skip(11).take(19) {
            *p = 4.0;
        }
        let advice = policy_recommendation(&forecast(points), 5.0, 14).expect("policy");
        assert_eq!(advice.days_below_threshold, 3);
        assert_ne!(advice.verdict, Verdict::Relax);
    }

    #[test]
    fn short_horizon_rejected() {
        let err = policy_recommendation(&forecast(vec![4.0; 10]), 5.0, 14);
        assert!(matches!(
            err,
            Err(PipelineError::Core(posrate_core::Error::DomainError(_)))
        ));
    }
}
