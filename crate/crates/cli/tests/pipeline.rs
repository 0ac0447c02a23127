//! End-to-end pipeline behavior on crafted snapshots and the bundled
//! synthetic fixture.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use posrate_cli::config::{BicVariant, ConfigOverlay, PipelineConfig};
use posrate_cli::pipeline::BatchReport;
use posrate_cli::{emit_reports, run_pipeline};

fn bundled_fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/synthetic_owid.csv")
}

fn config_for(input: PathBuf) -> PipelineConfig {
    ConfigOverlay {
        input: Some(input),
        ..Default::default()
    }
    .resolve()
    .expect("config")
}

#[test]
fn bundled_fixture_six_reports() {
    let batch = run_pipeline(&config_for(bundled_fixture())).expect("pipeline");
    assert_eq!(batch.reports.len(), 6);
    assert!(batch.all_succeeded(), "failures: {:?}",
        batch.failures().collect::<Vec<_>>());
    let countries: Vec<&str> = batch.reports.iter().map(|o| o.country.as_str()).collect();
    assert_eq!(
        countries,
        ["Avalon", "Borduria", "Carpathia", "Dinotopia", "Eldorado", "Zerzura"]
    );
}

#[test]
fn all_missing_month_is_isolated() {
    let mut file = tempfile::NamedTempFile::new().expect("temp file");
    writeln!(file, "date,location,positive_rate").expect("write");
    let start = chrono::NaiveDate::from_ymd_opt(2020, 4, 1).expect("date");
    for i in 0..120i64 {
        let date = start + chrono::Duration::days(i);
        // Healthy wanders around 8%; Hollow has all of May empty.
        let healthy = 0.08 + 0.01 * ((i as f64) * 0.4).sin();
        writeln!(file, "{date},Healthy,{healthy:.4}").expect("write");
        if date.format("%m").to_string() == "05" {
            writeln!(file, "{date},Hollow,").expect("write");
        } else {
            let v = 0.05 + 0.01 * ((i as f64) * 0.9).cos();
            writeln!(file, "{date},Hollow,{v:.4}").expect("write");
        }
    }

    let mut config = config_for(file.path().to_path_buf());
    config.countries = vec!["Healthy".into(), "Hollow".into()];
    config.date_end = start + chrono::Duration::days(119);
    let batch = run_pipeline(&config).expect("pipeline");

    assert!(batch.reports[0].report.is_some(), "Healthy should succeed: {:?}",
        batch.reports[0].error);
    let err = batch.reports[1].error.as_deref().expect("Hollow fails");
    assert!(err.contains("2020-05"), "error names the month: {err}");
}

#[test]
fn emitted_files_are_deterministic() {
    let config = config_for(bundled_fixture());
    let batch = run_pipeline(&config).expect("pipeline");

    let dir_a = tempfile::tempdir().expect("dir a");
    let dir_b = tempfile::tempdir().expect("dir b");
    let files_a = emit_reports(&batch, dir_a.path(), config.bic_variant).expect("emit a");
    let files_b = emit_reports(&batch, dir_b.path(), config.bic_variant).expect("emit b");
    assert_eq!(files_a.len(), files_b.len());

    for (a, b) in files_a.iter().zip(&files_b) {
        assert_eq!(a.file_name(), b.file_name());
        let bytes_a = fs::read(a).expect("read a");
        let bytes_b = fs::read(b).expect("read b");
        assert_eq!(bytes_a, bytes_b, "{:?} differs between runs", a.file_name());
    }
}

#[test]
fn single_report_manifest_and_headers() {
    let config = config_for(bundled_fixture());
    let mut config = config;
    config.countries = vec!["Avalon".into()];
    let batch = run_pipeline(&config).expect("pipeline");
    let dir = tempfile::tempdir().expect("dir");
    let files = emit_reports(&batch, dir.path(), BicVariant::Paper).expect("emit");

    // 2 tables + 4 per-country files + report.json + policy.csv.
    assert_eq!(files.len(), 8);
    let names: Vec<String> = files
        .iter()
        .map(|p| p.file_name().expect("name").to_string_lossy().into_owned())
        .collect();
    assert_eq!(
        names,
        [
            "table1.csv",
            "table2.csv",
            "forecast_Avalon.csv",
            "residuals_Avalon.csv",
            "histogram_Avalon.csv",
            "residual_acf_Avalon.csv",
            "report.json",
            "policy.csv",
        ]
    );

    let first_line = |name: &str| -> String {
        let text = fs::read_to_string(dir.path().join(name)).expect("read");
        text.lines().next().expect("non-empty").to_string()
    };
    assert_eq!(first_line("table1.csv"), "Country,P_ADF,p,d,q,AIC,BIC,BoxLjung_p");
    assert_eq!(first_line("table2.csv"), "Country,ME,RMSE,MAE,ACF1");
    assert_eq!(first_line("policy.csv"), "Country,verdict,multiplier");
    assert_eq!(first_line("forecast_Avalon.csv"), "date,point,lower,upper");
    assert_eq!(first_line("residuals_Avalon.csv"), "date,residual");
    assert_eq!(first_line("histogram_Avalon.csv"), "bin_lower,bin_upper,count");
    assert_eq!(
        first_line("residual_acf_Avalon.csv"),
        "lag,coefficient,confidence_bound"
    );

    // Forecast rows: horizon entries + header.
    let forecast = fs::read_to_string(dir.path().join("forecast_Avalon.csv")).expect("read");
    assert_eq!(forecast.lines().count(), 1 + 30);
}

#[test]
fn report_json_round_trips_exactly() {
    let config = config_for(bundled_fixture());
    let batch = run_pipeline(&config).expect("pipeline");
    let dir = tempfile::tempdir().expect("dir");
    emit_reports(&batch, dir.path(), config.bic_variant).expect("emit");

    let text = fs::read_to_string(dir.path().join("report.json")).expect("read");
    let parsed: BatchReport = serde_json::from_str(&text).expect("parse");
    assert_eq!(parsed, batch);
}

#[test]
fn relax_verdict_means_window_below_threshold_in_emitted_csv() {
    let config = config_for(bundled_fixture());
    let batch = run_pipeline(&config).expect("pipeline");
    let dir = tempfile::tempdir().expect("dir");
    emit_reports(&batch, dir.path(), config.bic_variant).expect("emit");

    let policy = fs::read_to_string(dir.path().join("policy.csv")).expect("read");
    for line in policy.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        let (country, verdict) = (fields[0], fields[1]);
        if verdict != "relax" {
            continue;
        }
        let slug: String = country
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        let forecast =
            fs::read_to_string(dir.path().join(format!("forecast_{slug}.csv"))).expect("read");
        for row in forecast.lines().skip(1).take(config.window) {
            let point: f64 = row.split(',').nth(1).expect("point").parse().expect("f64");
            assert!(
                point <= config.threshold,
                "{country} relaxed but day has {point}%"
            );
        }
    }
}
