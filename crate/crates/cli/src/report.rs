//! Report emission: summary tables, per-country plot data and the full
//! structured JSON report. CSV numerics carry four fixed decimals; the JSON
//! report keeps full precision.

use std::fs;
use std::path::{Path, PathBuf};

use crate::config::BicVariant;
use crate::error::{PipelineError, Result};
use crate::pipeline::{BatchReport, CountryReport};

pub const TABLE1_HEADER: &str = "Country,P_ADF,p,d,q,AIC,BIC,BoxLjung_p";
pub const TABLE2_HEADER: &str = "Country,ME,RMSE,MAE,ACF1";
pub const POLICY_HEADER: &str = "Country,verdict,multiplier";
pub const FORECAST_HEADER: &str = "date,point,lower,upper";
pub const RESIDUALS_HEADER: &str = "date,residual";
pub const HISTOGRAM_HEADER: &str = "bin_lower,bin_upper,count";
pub const RESIDUAL_ACF_HEADER: &str = "lag,coefficient,confidence_bound";

/// Writes the full report file set and returns the created paths:
/// `table1.csv`, `table2.csv`, `policy.csv`, `report.json`, plus per-country
/// `forecast_*`, `residuals_*`, `histogram_*` and `residual_acf_*` CSVs.
pub fn emit_reports(
    batch: &BatchReport,
    output_dir: &Path,
    bic_variant: BicVariant,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(output_dir)
        .map_err(|e| PipelineError::io(output_dir.display().to_string(), e))?;
    let mut written = Vec::new();

    let successes: Vec<&CountryReport> =
        batch.reports.iter().filter_map(|o| o.report.as_ref()).collect();

    let mut table1 = String::from(TABLE1_HEADER);
    table1.push('\n');
    for r in &successes {
        let bic = match bic_variant {
            BicVariant::Paper => r.model.bic_paper,
            BicVariant::Standard => r.model.bic_standard,
        };
        table1.push_str(&format!(
            "{},{:.4},{},{},{},{:.4},{:.4},{:.4}\n",
            r.country,
            r.adf.p_value,
            r.order.p,
            r.order.d,
            r.order.q,
            r.model.aic,
            bic,
            r.ljung_box.p_value,
        ));
    }
    written.push(write_file(output_dir, "table1.csv", &table1)?);

    let mut table2 = String::from(TABLE2_HEADER);
    table2.push('\n');
    for r in &successes {
        table2.push_str(&format!(
            "{},{:.4},{:.4},{:.4},{:.4}\n",
            r.country, r.metrics.me, r.metrics.rmse, r.metrics.mae, r.metrics.residual_acf1,
        ));
    }
    written.push(write_file(output_dir, "table2.csv", &table2)?);

    for r in &successes {
        let slug = slugify(&r.country);

        let mut forecast = String::from(FORECAST_HEADER);
        forecast.push('\n');
        for (i, date) in r.forecast.dates().iter().enumerate() {
            forecast.push_str(&format!(
                "{date},{:.4},{:.4},{:.4}\n",
                r.forecast.point[i], r.forecast.lower[i], r.forecast.upper[i],
            ));
        }
        written.push(write_file(output_dir, &format!("forecast_{slug}.csv"), &forecast)?);

        let mut residuals = String::from(RESIDUALS_HEADER);
        residuals.push('\n');
        for (date, value) in r.residual_dates.iter().zip(&r.residuals) {
            residuals.push_str(&format!("{date},{value:.4}\n"));
        }
        written.push(write_file(
            output_dir,
            &format!("residuals_{slug}.csv"),
            &residuals,
        )?);

        let mut hist = String::from(HISTOGRAM_HEADER);
        hist.push('\n');
        for (i, count) in r.histogram.counts.iter().enumerate() {
            hist.push_str(&format!(
                "{:.4},{:.4},{count}\n",
                r.histogram.bin_edges[i],
                r.histogram.bin_edges[i + 1],
            ));
        }
        written.push(write_file(output_dir, &format!("histogram_{slug}.csv"), &hist)?);

        let mut racf = String::from(RESIDUAL_ACF_HEADER);
        racf.push('\n');
        for (lag, coef) in r.residual_acf.lags.iter().zip(&r.residual_acf.coefficients) {
            racf.push_str(&format!(
                "{lag},{coef:.4},{:.4}\n",
                r.residual_acf.confidence_bound,
            ));
        }
        written.push(write_file(
            output_dir,
            &format!("residual_acf_{slug}.csv"),
            &racf,
        )?);
    }

    let json = serde_json::to_string_pretty(batch)
        .map_err(|e| PipelineError::Config(format!("cannot serialize report: {e}")))?;
    written.push(write_file(output_dir, "report.json", &(json + "\n"))?);

    let mut policy = String::from(POLICY_HEADER);
    policy.push('\n');
    for r in &successes {
        policy.push_str(&format!(
            "{},{},{:.4}\n",
            r.country, r.policy.verdict, r.policy.required_test_multiplier,
        ));
    }
    written.push(write_file(output_dir, "policy.csv", &policy)?);

    Ok(written)
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| PipelineError::io(path.display().to_string(), e))?;
    Ok(path)
}

/// File-name-safe version of a country label.
fn slugify(country: &str) -> String {
    country
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}
