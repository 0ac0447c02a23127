//! CSV ingestion of positivity data in the OWID schema: columns `date`,
//! `location`, `positive_rate` (any order, extra columns ignored).

use std::path::Path;

use chrono::NaiveDate;
use posrate_core::RawSeries;

use crate::error::{PipelineError, Result};

/// Extracts one country's positive-rate series within [date_start, date_end].
///
/// Empty cells become missing values. When every observed value is ≤ 1.0 the
/// column is read as a fraction and scaled ×100 to percent.
pub fn ingest_owid_csv(
    path: &Path,
    country: &str,
    date_start: NaiveDate,
    date_end: NaiveDate,
) -> Result<RawSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| PipelineError::SchemaError(format!("{}: {e}", path.display())))?;

    let headers = reader
        .headers()
        .map_err(|e| PipelineError::SchemaError(format!("{}: {e}", path.display())))?
        .clone();
    let column = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| {
            PipelineError::SchemaError(format!(
                "{}: missing required column '{name}'",
                path.display()
            ))
        })
    };
    let date_col = column("date")?;
    let location_col = column("location")?;
    let rate_col = column("positive_rate")?;

    let mut rows: Vec<(NaiveDate, Option<f64>)> = Vec::new();
    let mut country_seen = false;
    for (line, record) in reader.records().enumerate() {
        let record =
            record.map_err(|e| PipelineError::SchemaError(format!("{}: {e}", path.display())))?;
        if record.get(location_col) != Some(country) {
            continue;
        }
        country_seen = true;
        let date_text = record.get(date_col).unwrap_or("").trim();
        let date = NaiveDate::parse_from_str(date_text, "%Y-%m-%d").map_err(|_| {
            PipelineError::SchemaError(format!(
                "{} row {}: bad date '{date_text}'",
                path.display(),
                line + 2
            ))
        })?;
        if date < date_start || date > date_end {
            continue;
        }
        let cell = record.get(rate_col).unwrap_or("").trim();
        let value = if cell.is_empty() {
            None
        } else {
            Some(cell.parse::<f64>().map_err(|_| {
                PipelineError::SchemaError(format!(
                    "{} row {}: bad positive_rate '{cell}'",
                    path.display(),
                    line + 2
                ))
            })?)
        };
        rows.push((date, value));
    }

    if !country_seen {
        return Err(PipelineError::UnknownCountry(country.to_string()));
    }
    if rows.is_empty() {
        return Err(PipelineError::EmptyRange {
            country: country.to_string(),
        });
    }

    rows.sort_by_key(|(date, _)| *date);
    let max_observed = rows
        .iter()
        .filter_map(|(_, v)| *v)
        .fold(f64::NEG_INFINITY, f64::max);
    let fraction = max_observed.is_finite() && max_observed <= 1.0;

    let (dates, values): (Vec<_>, Vec<_>) = rows
        .into_iter()
        .map(|(d, v)| (d, if fraction { v.map(|x| x * 100.0) } else { v }))
        .unzip();
    RawSeries::new(country, dates, values).map_err(PipelineError::from)
}

/// Distinct locations in the file, in order of first appearance.
pub fn list_locations(path: &Path) -> Result<Vec<String>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| PipelineError::SchemaError(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| PipelineError::SchemaError(format!("{}: {e}", path.display())))?
        .clone();
    let location_col = headers
        .iter()
        .position(|h| h == "location")
        .ok_or_else(|| {
            PipelineError::SchemaError(format!(
                "{}: missing required column 'location'",
                path.display()
            ))
        })?;
    let mut seen = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| PipelineError::SchemaError(format!("{}: {e}", path.display())))?;
        if let Some(loc) = record.get(location_col) {
            if !loc.is_empty() && !seen.iter().any(|s| s == loc) {
                seen.push(loc.to_string());
            }
        }
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().expect("temp file");
        f.write_all(content.as_bytes()).expect("write");
        f
    }

    fn day(d: u32) -> NaiveDate {
        NaiveDate::from_ymd_opt(2020, 4, d).expect("date")
    }

    #[test]
    fn extracts_and_scales_fractions() {
        let f = write_csv(
            "iso_code,location,date,total_tests,positive_rate\n\
             AAA,Avalon,2020-04-01,10,0.06\n\
             AAA,Avalon,2020-04-02,11,\n\
             AAA,Avalon,2020-04-03,12,0.05\n\
             BBB,Borduria,2020-04-01,5,0.50\n",
        );
        let raw = ingest_owid_csv(f.path(), "Avalon", day(1), day(30)).expect("ingest");
        assert_eq!(raw.values(), &[Some(6.0), None, Some(5.0)]);
        assert_eq!(raw.dates().len(), 3);
    }

    #[test]
    fn percent_data_passes_through_unscaled() {
        let f = write_csv(
            "date,location,positive_rate\n\
             2020-04-01,Avalon,11.7\n\
             2020-04-02,Avalon,9.3\n",
        );
        let raw = ingest_owid_csv(f.path(), "Avalon", day(1), day(30)).expect("ingest");
        assert_eq!(raw.values(), &[Some(11.7), Some(9.3)]);
    }

    #[test]
    fn unknown_country_named_in_error() {
        let f = write_csv("date,location,positive_rate\n2020-04-01,Avalon,0.1\n");
        match ingest_owid_csv(f.path(), "Atlantis", day(1), day(30)) {
            Err(PipelineError::UnknownCountry(c)) => assert_eq!(c, "Atlantis"),
            other => panic!("expected UnknownCountry, got {other:?}"),
        }
    }

    #[test]
    fn empty_range_detected() {
        let f = write_csv("date,location,positive_rate\n2020-03-01,Avalon,0.1\n");
        assert!(matches!(
            ingest_owid_csv(f.path(), "Avalon", day(1), day(30)),
            Err(PipelineError::EmptyRange { .. })
        ));
    }

    #[test]
    fn missing_column_is_schema_error() {
        let f = write_csv("date,country,positive_rate\n2020-04-01,Avalon,0.1\n");
        match ingest_owid_csv(f.path(), "Avalon", day(1), day(30)) {
            Err(PipelineError::SchemaError(msg)) => assert!(msg.contains("location")),
            other => panic!("expected SchemaError, got {other:?}"),
        }
    }

    #[test]
    fn date_filter_applied() {
        let f = write_csv(
            "date,location,positive_rate\n\
             2020-03-31,Avalon,0.9\n\
             2020-04-01,Avalon,0.1\n\
             2020-04-02,Avalon,0.2\n\
             2020-05-01,Avalon,0.3\n",
        );
        let raw = ingest_owid_csv(f.path(), "Avalon", day(1), day(30)).expect("ingest");
        assert_eq!(raw.values(), &[Some(10.0), Some(20.0)]);
    }

    #[test]
    fn locations_listed_in_first_appearance_order() {
        let f = write_csv(
            "date,location,positive_rate\n\
             2020-04-01,Borduria,0.2\n\
             2020-04-01,Avalon,0.1\n\
             2020-04-02,Borduria,0.3\n",
        );
        let locs = list_locations(f.path()).expect("locations");
        assert_eq!(locs, vec!["Borduria", "Avalon"]);
    }
}
