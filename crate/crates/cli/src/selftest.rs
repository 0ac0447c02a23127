//! Monte Carlo and exact-arithmetic verification suite for the modelling
//! core. Each criterion pins its own tolerances and runtime budget and is
//! deterministic: every random draw comes from the seeded simulator.

use std::time::{Duration, Instant};

use posrate_core::{
    chi2_sf, difference, fit, forecast, information_criteria, integrate, ljung_box,
    min_root_magnitude, norm_cdf, norm_quantile, psi_weights, residual_metrics, simulate_arima,
    ArimaModel, ArimaOrder, TimeSeries,
};

#[derive(Debug, Clone)]
pub struct CriterionOutcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl std::fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "criterion {:>2} ({}): {} — {} [{:.2}s]",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed.as_secs_f64(),
        )
    }
}

fn order(p: usize, d: usize, q: usize) -> ArimaOrder {
    ArimaOrder::new(p, d, q).expect("order within caps")
}

fn run<F>(id: usize, name: &'static str, budget: Option<Duration>, body: F) -> CriterionOutcome
where
    F: FnOnce() -> Result<String, String>,
{
    let start = Instant::now();
    let result = body();
    let elapsed = start.elapsed();
    let (mut passed, mut detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(limit) = budget {
        if elapsed > limit {
            passed = false;
            detail.push_str(&format!(
                "; exceeded the {:.0}s runtime budget",
                limit.as_secs_f64()
            ));
        }
    }
    CriterionOutcome {
        id,
        name,
        passed,
        detail,
        elapsed,
    }
}

/// Criterion 1: integrate ∘ difference identity for d ∈ {0,1,2,3} over 100
/// random series, max abs error < 1e-9.
pub fn criterion_1_round_trip() -> CriterionOutcome {
    run(1, "difference/integrate round trip", Some(Duration::from_secs(1)), || {
        let mut worst = 0.0f64;
        for d in 0..=3usize {
            for trial in 0..25u64 {
                let n = 20 + (trial as usize % 30);
                let series =
                    simulate_arima(order(0, 0, 0), &[], &[], 0.0, 10.0, n, 1000 + 25 * d as u64 + trial)
                        .map_err(|e| e.to_string())?;
                let diffs = difference(&series, d).map_err(|e| e.to_string())?;
                let back =
                    integrate(&diffs, d, &series.values()[..d]).map_err(|e| e.to_string())?;
                for (got, want) in back.values().iter().zip(&series.values()[d..]) {
                    worst = worst.max((got - want).abs());
                }
            }
        }
        if worst < 1e-9 {
            Ok(format!("max abs error {worst:.3e} over 100 series"))
        } else {
            Err(format!("max abs error {worst:.3e} ≥ 1e-9"))
        }
    })
}

fn recovery_study(
    model_order: ArimaOrder,
    phi: &[f64],
    theta: &[f64],
    truth: f64,
    pick: fn(&ArimaModel) -> f64,
    seed_base: u64,
) -> Result<(f64, f64, Vec<f64>), String> {
    let mut errors = Vec::with_capacity(100);
    let mut roots = Vec::new();
    for seed in 0..100 {
        let data = simulate_arima(model_order, phi, theta, 0.0, 1.0, 1000, seed_base + seed)
            .map_err(|e| e.to_string())?;
        let model = fit(&data, model_order, None).map_err(|e| format!("seed {seed}: {e}"))?;
        errors.push((pick(&model) - truth).abs());
        roots.push(min_root_magnitude(&model.ar_polynomial()));
        roots.push(min_root_magnitude(&model.ma_polynomial()));
    }
    let mean = errors.iter().sum::<f64>() / errors.len() as f64;
    let max = errors.iter().cloned().fold(0.0, f64::max);
    Ok((mean, max, roots))
}

/// Criterion 2: AR(1) φ=0.7 and MA(1) θ=0.5 recovery at n=1000 over 100
/// seeds: mean abs error < 0.05, every seed within ±0.15.
pub fn criterion_2_estimator_recovery() -> CriterionOutcome {
    run(2, "estimator recovery", Some(Duration::from_secs(60)), || {
        let (ar_mean, ar_max, _) =
            recovery_study(order(1, 0, 0), &[0.7], &[], 0.7, |m| m.phi[0], 2000)?;
        let (ma_mean, ma_max, _) =
            recovery_study(order(0, 0, 1), &[], &[0.5], 0.5, |m| m.theta[0], 3000)?;
        let detail = format!(
            "AR(1): mean |err| {ar_mean:.4}, max {ar_max:.4}; MA(1): mean |err| {ma_mean:.4}, max {ma_max:.4}"
        );
        if ar_mean < 0.05 && ar_max <= 0.15 && ma_mean < 0.05 && ma_max <= 0.15 {
            Ok(detail)
        } else {
            Err(detail)
        }
    })
}

/// Criterion 3: ADF size on the random-walk null within [2%, 9%] and power
/// ≥ 95% against stationary AR(1) φ=0.5, n=200, 500 seeds each.
pub fn criterion_3_adf_calibration() -> CriterionOutcome {
    run(3, "ADF size and power", Some(Duration::from_secs(60)), || {
        let mut null_rejections = 0usize;
        let mut power_rejections = 0usize;
        for seed in 0..500 {
            let walk = simulate_arima(order(0, 1, 0), &[], &[], 0.0, 1.0, 200, 4000 + seed)
                .map_err(|e| e.to_string())?;
            if posrate_core::adf_test(&walk, None)
                .map_err(|e| e.to_string())?
                .p_value
                < 0.05
            {
                null_rejections += 1;
            }
            let ar = simulate_arima(order(1, 0, 0), &[0.5], &[], 0.0, 1.0, 200, 5000 + seed)
                .map_err(|e| e.to_string())?;
            if posrate_core::adf_test(&ar, None)
                .map_err(|e| e.to_string())?
                .p_value
                < 0.05
            {
                power_rejections += 1;
            }
        }
        let size = null_rejections as f64 / 500.0;
        let power = power_rejections as f64 / 500.0;
        let detail = format!("size {:.1}%, power {:.1}%", size * 100.0, power * 100.0);
        if (0.02..=0.09).contains(&size) && power >= 0.95 {
            Ok(detail)
        } else {
            Err(detail)
        }
    })
}

/// Criterion 4: Ljung-Box p-values approximately uniform under the
/// white-noise null (KS distance < 0.08 over 1000 seeds).
pub fn criterion_4_ljung_box_uniformity() -> CriterionOutcome {
    run(4, "Ljung-Box null uniformity", Some(Duration::from_secs(30)), || {
        let mut p_values = Vec::with_capacity(1000);
        for seed in 0..1000 {
            let noise = simulate_arima(order(0, 0, 0), &[], &[], 0.0, 1.0, 200, 6000 + seed)
                .map_err(|e| e.to_string())?;
            let result = ljung_box(noise.values(), 10, 0).map_err(|e| e.to_string())?;
            p_values.push(result.p_value);
        }
        p_values.sort_by(f64::total_cmp);
        let n = p_values.len() as f64;
        let mut ks = 0.0f64;
        for (i, p) in p_values.iter().enumerate() {
            ks = ks.max(((i + 1) as f64 / n - p).abs());
            ks = ks.max((p - i as f64 / n).abs());
        }
        let detail = format!("KS distance {ks:.4}");
        if ks < 0.08 {
            Ok(detail)
        } else {
            Err(detail)
        }
    })
}

fn coverage_study() -> Result<(usize, Vec<f64>), String> {
    let mut covered = 0usize;
    let mut roots = Vec::new();
    for seed in 0..2000u64 {
        let path = simulate_arima(order(1, 0, 0), &[0.6], &[], 0.0, 1.0, 201, 7000 + seed)
            .map_err(|e| e.to_string())?;
        let history = TimeSeries::new(
            path.name(),
            path.dates()[..200].to_vec(),
            path.values()[..200].to_vec(),
        )
        .map_err(|e| e.to_string())?;
        let model = fit(&history, order(1, 0, 0), None).map_err(|e| format!("seed {seed}: {e}"))?;
        roots.push(min_root_magnitude(&model.ar_polynomial()));
        roots.push(min_root_magnitude(&model.ma_polynomial()));
        let fc = forecast(&model, &history, 1, 0.80).map_err(|e| e.to_string())?;
        let realized = path.values()[200];
        if fc.lower[0] <= realized && realized <= fc.upper[0] {
            covered += 1;
        }
    }
    Ok((covered, roots))
}

/// Criterion 5: empirical coverage of the one-step 80% interval on AR(1)
/// φ=0.6 data within [0.76, 0.84] over 2000 simulate-fit-forecast trials.
pub fn criterion_5_interval_calibration() -> CriterionOutcome {
    run(5, "interval calibration", Some(Duration::from_secs(300)), || {
        let (covered, _) = coverage_study()?;
        let coverage = covered as f64 / 2000.0;
        let detail = format!("one-step 80% coverage {:.3}", coverage);
        if (0.76..=0.84).contains(&coverage) {
            Ok(detail)
        } else {
            Err(detail)
        }
    })
}

/// Criterion 6: ARIMA(0,1,0) forecasts equal the last observation exactly
/// and half-widths follow z(0.9)·σ̂·√i to 1e-9.
pub fn criterion_6_random_walk_forecast() -> CriterionOutcome {
    run(6, "random-walk forecast", None, || {
        let path =
            simulate_arima(order(0, 1, 0), &[], &[], 0.0, 1.0, 80, 8000).map_err(|e| e.to_string())?;
        let model = fit(&path, order(0, 1, 0), None).map_err(|e| e.to_string())?;
        let fc = forecast(&model, &path, 20, 0.80).map_err(|e| e.to_string())?;
        let last = path.last_value();
        for point in &fc.point {
            if *point != last {
                return Err(format!("point forecast {point} differs from last value {last}"));
            }
        }
        let z = norm_quantile(0.9).map_err(|e| e.to_string())?;
        let sigma = model.sigma2.sqrt();
        let mut worst = 0.0f64;
        for i in 0..fc.horizon() {
            let want = z * sigma * ((i + 1) as f64).sqrt();
            let got = (fc.upper[i] - fc.lower[i]) / 2.0;
            worst = worst.max((got - want).abs());
        }
        if worst < 1e-9 {
            Ok(format!("flat at {last:.4}, half-width error {worst:.2e}"))
        } else {
            Err(format!("half-width error {worst:.2e} ≥ 1e-9"))
        }
    })
}

/// Criterion 7: chi2_sf(2,2) = e^(−1) to 1e-12 and the normal quantile
/// round trip holds to 1e-8 on the 99 centiles.
pub fn criterion_7_special_functions() -> CriterionOutcome {
    run(7, "special functions", None, || {
        let gap = (chi2_sf(2.0, 2) - (-1.0f64).exp()).abs();
        if gap > 1e-12 {
            return Err(format!("chi2_sf(2,2) off by {gap:.2e}"));
        }
        let mut worst = 0.0f64;
        for i in 1..100 {
            let p = i as f64 / 100.0;
            let z = norm_quantile(p).map_err(|e| e.to_string())?;
            worst = worst.max((norm_cdf(z) - p).abs());
        }
        if worst <= 1e-8 {
            Ok(format!(
                "chi2_sf gap {gap:.2e}, worst quantile round trip {worst:.2e}"
            ))
        } else {
            Err(format!("quantile round trip error {worst:.2e} > 1e-8"))
        }
    })
}

fn synthetic_model(p: usize, q: usize, with_mean: bool, loglik: f64, n: usize) -> ArimaModel {
    ArimaModel {
        order: order(p, 0, q),
        phi: vec![0.1; p],
        theta: vec![0.1; q],
        mean: with_mean.then_some(0.0),
        sigma2: 1.0,
        loglik,
        aic: 0.0,
        bic_paper: 0.0,
        bic_standard: 0.0,
        n_effective: n,
        residuals: Vec::new(),
    }
}

/// Criterion 8: information-criteria arithmetic exact to 1e-9 and AIC
/// strictly increasing in the parameter count.
pub fn criterion_8_information_criteria() -> CriterionOutcome {
    run(8, "information criteria", None, || {
        // ln L = −10, k = 3 (p=1 + mean + σ²).
        let model = synthetic_model(1, 0, true, -10.0, 7);
        let (aic, bic_paper, bic_standard) = information_criteria(&model);
        let ln_n = 7f64.ln();
        let checks = [
            (aic, 26.0),
            (bic_paper, 20.0 + 2.0 * ln_n * 3.0),
            (bic_standard, 20.0 + ln_n * 3.0),
        ];
        for (got, want) in checks {
            if (got - want).abs() > 1e-9 {
                return Err(format!("criterion value {got} differs from {want}"));
            }
        }
        let model_n100 = synthetic_model(1, 0, true, -10.0, 100);
        let (_, _, bic100) = information_criteria(&model_n100);
        if (bic100 - 33.815510557964274).abs() > 1e-9 {
            return Err(format!("bic_standard at N=100 was {bic100}"));
        }
        let mut prev: Option<(f64, f64, f64)> = None;
        for p in 1..=5 {
            let cur = information_criteria(&synthetic_model(p, 0, true, -10.0, 50));
            if let Some(before) = prev {
                if cur.0 <= before.0 || cur.1 <= before.1 || cur.2 <= before.2 {
                    return Err("criteria not strictly increasing in k".into());
                }
            }
            prev = Some(cur);
        }
        Ok("Eq. arithmetic exact; AIC/BIC monotone in k".into())
    })
}

/// Criterion 9: rmse ≥ mae over 1000 random residual vectors.
pub fn criterion_9_metric_inequality() -> CriterionOutcome {
    run(9, "rmse ≥ mae", None, || {
        let mut violations = 0usize;
        for seed in 0..1000u64 {
            let n = 2 + (seed as usize % 120);
            let sigma = 0.1 + (seed % 13) as f64;
            let noise = simulate_arima(order(0, 0, 0), &[], &[], 0.0, sigma, n, 9000 + seed)
                .map_err(|e| e.to_string())?;
            let m = residual_metrics(noise.values()).map_err(|e| e.to_string())?;
            if m.rmse < m.mae {
                violations += 1;
            }
        }
        if violations == 0 {
            Ok("no violations over 1000 vectors".into())
        } else {
            Err(format!("{violations} violations"))
        }
    })
}

/// Criterion 10: psi weights match the AR(1) geometric sequence and the
/// ARMA(1,1) hand recursion to 1e-12.
pub fn criterion_10_psi_weights() -> CriterionOutcome {
    run(10, "psi weights", None, || {
        let ar1 = ArimaModel {
            phi: vec![0.5],
            ..synthetic_model(1, 0, false, 0.0, 10)
        };
        let psi = psi_weights(&ar1, 50);
        for (j, w) in psi.iter().enumerate() {
            if (w - 0.5f64.powi(j as i32)).abs() > 1e-12 {
                return Err(format!("AR(1) psi[{j}] = {w}"));
            }
        }
        let arma = ArimaModel {
            phi: vec![0.5],
            theta: vec![0.3],
            ..synthetic_model(1, 1, false, 0.0, 10)
        };
        let psi = psi_weights(&arma, 4);
        for (j, want) in [(1usize, 0.8f64), (2, 0.4), (3, 0.2)] {
            if (psi[j] - want).abs() > 1e-12 {
                return Err(format!("ARMA(1,1) psi[{j}] = {}", psi[j]));
            }
        }
        Ok("AR(1) geometric and ARMA(1,1) recursion exact".into())
    })
}

/// Criterion 12: every model fitted by the recovery and coverage studies
/// keeps all AR/MA polynomial roots outside the unit circle (magnitude
/// > 1 + 1e-8). Re-runs the same seeded fits as criteria 2 and 5.
pub fn criterion_12_root_magnitudes() -> CriterionOutcome {
    run(12, "stationarity/invertibility", Some(Duration::from_secs(300)), || {
        let (_, _, ar_roots) =
            recovery_study(order(1, 0, 0), &[0.7], &[], 0.7, |m| m.phi[0], 2000)?;
        let (_, _, ma_roots) =
            recovery_study(order(0, 0, 1), &[], &[0.5], 0.5, |m| m.theta[0], 3000)?;
        let (_, coverage_roots) = coverage_study()?;
        let mut violations = 0usize;
        let mut smallest = f64::INFINITY;
        for r in ar_roots
            .iter()
            .chain(&ma_roots)
            .chain(&coverage_roots)
        {
            smallest = smallest.min(*r);
            if *r <= 1.0 + 1e-8 {
                violations += 1;
            }
        }
        let detail = format!("smallest root magnitude {smallest:.6}");
        if violations == 0 {
            Ok(detail)
        } else {
            Err(format!("{violations} root violations; {detail}"))
        }
    })
}

/// Runs the numeric acceptance criteria (the end-to-end CLI criterion lives
/// in the integration suite, which drives the built binary).
pub fn run_all() -> Vec<CriterionOutcome> {
    vec![
        criterion_1_round_trip(),
        criterion_2_estimator_recovery(),
        criterion_3_adf_calibration(),
        criterion_4_ljung_box_uniformity(),
        criterion_5_interval_calibration(),
        criterion_6_random_walk_forecast(),
        criterion_7_special_functions(),
        criterion_8_information_criteria(),
        criterion_9_metric_inequality(),
        criterion_10_psi_weights(),
        criterion_12_root_magnitudes(),
    ]
}
