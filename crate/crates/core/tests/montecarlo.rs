//! Statistical behavior of the estimators against the seeded simulator.

use posrate_core::{
    acf, adf_test, fit, histogram, norm_cdf, pacf, simulate_arima, ArimaOrder,
};

fn order(p: usize, d: usize, q: usize) -> ArimaOrder {
    ArimaOrder::new(p, d, q).expect("order within caps")
}

#[test]
fn acf_white_noise_mostly_inside_band() {
    let noise = simulate_arima(order(0, 0, 0), &[], &[], 0.0, 1.0, 400, 31).expect("simulate");
    let res = acf(&noise, 20).expect("acf");
    let bound = 1.96 / 400f64.sqrt();
    assert!((res.confidence_bound - bound).abs() < 1e-12);
    let inside = res.coefficients[1..]
        .iter()
        .filter(|c| c.abs() <= bound)
        .count();
    assert!(inside >= 17, "only {inside} of 20 lags inside ±{bound}");
}

#[test]
fn pacf_ar1_cuts_off_after_lag_one() {
    let data = simulate_arima(order(1, 0, 0), &[0.7], &[], 0.0, 1.0, 1000, 32).expect("simulate");
    let res = pacf(&data, 10).expect("pacf");
    assert!(
        (res.coefficients[0] - 0.7).abs() < 0.1,
        "pacf(1) = {}",
        res.coefficients[0]
    );
    let band = 2.0 / 1000f64.sqrt();
    let inside = res.coefficients[1..]
        .iter()
        .filter(|c| c.abs() <= band)
        .count();
    assert!(inside >= 8, "only {inside} of 9 higher lags inside ±{band}");
}

#[test]
fn pacf_ar2_second_lag() {
    let data =
        simulate_arima(order(2, 0, 0), &[0.5, 0.3], &[], 0.0, 1.0, 2000, 33).expect("simulate");
    let res = pacf(&data, 5).expect("pacf");
    assert!(
        (res.coefficients[1] - 0.3).abs() < 0.1,
        "pacf(2) = {}",
        res.coefficients[1]
    );
}

#[test]
fn adf_detects_stationary_ar1() {
    let data = simulate_arima(order(1, 0, 0), &[0.5], &[], 0.0, 1.0, 200, 34).expect("simulate");
    let res = adf_test(&data, None).expect("adf");
    assert!(res.p_value < 0.05, "p = {}", res.p_value);
}

#[test]
fn histogram_of_gaussian_draws_matches_cdf_mass() {
    let draws = simulate_arima(order(0, 0, 0), &[], &[], 0.0, 1.0, 10_000, 35).expect("simulate");
    let h = histogram(draws.values(), 20).expect("histogram");
    let n = draws.len() as f64;
    for (i, &count) in h.counts.iter().enumerate() {
        let mass = norm_cdf(h.bin_edges[i + 1]) - norm_cdf(h.bin_edges[i]);
        let empirical = count as f64 / n;
        assert!(
            (empirical - mass).abs() <= 0.02,
            "bin {i}: empirical {empirical} vs normal mass {mass}"
        );
    }
}

#[test]
fn well_specified_fit_leaves_uncorrelated_residuals() {
    // Mirrors the residual-correlogram check: the lag-1 residual
    // autocorrelation should sit inside ±2/√n for ≈95% of draws.
    let mut hits = 0;
    let trials = 50;
    for seed in 0..trials {
        let data =
            simulate_arima(order(1, 0, 0), &[0.6], &[], 0.0, 1.0, 400, 100 + seed).expect("simulate");
        let model = fit(&data, order(1, 0, 0), None).expect("fit");
        let metrics = posrate_core::residual_metrics(&model.residuals).expect("metrics");
        let band = 2.0 / (model.n_effective as f64).sqrt();
        if metrics.residual_acf1.abs() <= band {
            hits += 1;
        }
    }
    assert!(hits * 10 >= trials * 9, "only {hits}/{trials} inside the band");
}
