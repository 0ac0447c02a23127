//! Pipeline configuration: defaults, optional TOML file, CLI overrides.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use chrono::NaiveDate;
use posrate_core::ArimaOrder;
use serde::{Deserialize, Serialize};

use crate::error::{PipelineError, Result};

/// How the model order is chosen per country.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderMode {
    Auto,
    Fixed(ArimaOrder),
}

impl FromStr for OrderMode {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(OrderMode::Auto);
        }
        Ok(OrderMode::Fixed(parse_order(s)?))
    }
}

/// Which BIC definition lands in the table reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BicVariant {
    /// −2 ln L + 2 ln(N) k.
    Paper,
    /// −2 ln L + ln(N) k.
    Standard,
}

impl FromStr for BicVariant {
    type Err = PipelineError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(BicVariant::Paper),
            "standard" => Ok(BicVariant::Standard),
            other => Err(PipelineError::Config(format!(
                "unknown BIC variant '{other}' (expected paper or standard)"
            ))),
        }
    }
}

pub fn parse_order(s: &str) -> Result<ArimaOrder> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(PipelineError::Config(format!(
            "order must be 'p,d,q' or 'auto', got '{s}'"
        )));
    }
    let parse = |t: &str| -> Result<usize> {
        t.parse()
            .map_err(|_| PipelineError::Config(format!("invalid order component '{t}'")))
    };
    ArimaOrder::new(parse(parts[0])?, parse(parts[1])?, parse(parts[2])?)
        .map_err(PipelineError::from)
}

/// Fully resolved pipeline configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub input_path: PathBuf,
    /// Countries to model; empty means every location found in the input.
    pub countries: Vec<String>,
    pub date_start: NaiveDate,
    pub date_end: NaiveDate,
    pub horizon: usize,
    pub level: f64,
    /// Positivity threshold in percent.
    pub threshold: f64,
    /// Observation window in days for the relaxation rule.
    pub window: usize,
    pub order_mode: OrderMode,
    /// Search caps for automatic order selection.
    pub caps: ArimaOrder,
    pub refine: bool,
    pub bic_variant: BicVariant,
    pub output_dir: PathBuf,
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.date_start >= self.date_end {
            return Err(PipelineError::Config(format!(
                "date_start {} must precede date_end {}",
                self.date_start, self.date_end
            )));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(PipelineError::Config(format!(
                "level must lie in (0, 1), got {}",
                self.level
            )));
        }
        if self.threshold <= 0.0 {
            return Err(PipelineError::Config(format!(
                "threshold must be positive, got {}",
                self.threshold
            )));
        }
        if self.window == 0 || self.horizon < self.window {
            return Err(PipelineError::Config(format!(
                "horizon {} must cover the {}-day observation window",
                self.horizon, self.window
            )));
        }
        Ok(())
    }
}

/// Builder merging CLI flags over an optional config file over defaults.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverlay {
    pub input: Option<PathBuf>,
    pub countries: Option<Vec<String>>,
    pub start: Option<NaiveDate>,
    pub end: Option<NaiveDate>,
    pub horizon: Option<usize>,
    pub level: Option<f64>,
    pub threshold: Option<f64>,
    pub window: Option<usize>,
    /// "auto" or "p,d,q".
    pub order: Option<String>,
    /// "p,d,q" caps for auto selection.
    pub caps: Option<String>,
    pub refine: Option<bool>,
    /// "paper" or "standard".
    pub bic: Option<String>,
    pub output: Option<PathBuf>,
}

impl ConfigOverlay {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::io(path.display().to_string(), e))?;
        toml::from_str(&text).map_err(|e| {
            PipelineError::Config(format!("cannot parse {}: {e}", path.display()))
        })
    }

    /// Fills unset fields from `other` (lower precedence).
    pub fn or(mut self, other: ConfigOverlay) -> Self {
        self.input = self.input.or(other.input);
        self.countries = self.countries.or(other.countries);
        self.start = self.start.or(other.start);
        self.end = self.end.or(other.end);
        self.horizon = self.horizon.or(other.horizon);
        self.level = self.level.or(other.level);
        self.threshold = self.threshold.or(other.threshold);
        self.window = self.window.or(other.window);
        self.order = self.order.or(other.order);
        self.caps = self.caps.or(other.caps);
        self.refine = self.refine.or(other.refine);
        self.bic = self.bic.or(other.bic);
        self.output = self.output.or(other.output);
        self
    }

    /// Resolves against the defaults; `input` must be present somewhere.
    pub fn resolve(self) -> Result<PipelineConfig> {
        let input_path = self
            .input
            .ok_or_else(|| PipelineError::Config("no input file given".into()))?;
        let config = PipelineConfig {
            input_path,
            countries: self.countries.unwrap_or_default(),
            date_start: self
                .start
                .unwrap_or_else(|| NaiveDate::from_ymd_opt(2020, 4, 1).expect("fixed date")),
            date_end: self
                .end
                .unwrap_or_else(|| NaiveDate::from_ymd_opt(2020, 9, 12).expect("fixed date")),
            horizon: self.horizon.unwrap_or(30),
            level: self.level.unwrap_or(0.80),
            threshold: self.threshold.unwrap_or(5.0),
            window: self.window.unwrap_or(14),
            order_mode: match self.order {
                Some(s) => s.parse()?,
                None => OrderMode::Auto,
            },
            caps: match self.caps {
                Some(s) => parse_order(&s)?,
                None => ArimaOrder::new(7, 2, 7).expect("default caps"),
            },
            refine: self.refine.unwrap_or(false),
            bic_variant: match self.bic {
                Some(s) => s.parse()?,
                None => BicVariant::Paper,
            },
            output_dir: self.output.unwrap_or_else(|| PathBuf::from("out")),
        };
        config.validate()?;
        Ok(config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let overlay = ConfigOverlay {
            input: Some(PathBuf::from("data.csv")),
            ..Default::default()
        };
        let cfg = overlay.resolve().expect("resolve");
        assert_eq!(cfg.horizon, 30);
        assert_eq!(cfg.level, 0.80);
        assert_eq!(cfg.threshold, 5.0);
        assert_eq!(cfg.window, 14);
        assert_eq!(cfg.order_mode, OrderMode::Auto);
        assert_eq!(cfg.bic_variant, BicVariant::Paper);
        assert_eq!(cfg.date_start, NaiveDate::from_ymd_opt(2020, 4, 1).unwrap());
        assert_eq!(cfg.date_end, NaiveDate::from_ymd_opt(2020, 9, 12).unwrap());
    }

    #[test]
    fn missing_input_is_config_error() {
        let overlay = ConfigOverlay::default();
        assert!(matches!(
            overlay.resolve(),
            Err(PipelineError::Config(_))
        ));
    }

    #[test]
    fn order_mode_parsing() {
        assert_eq!("auto".parse::<OrderMode>().expect("auto"), OrderMode::Auto);
        let fixed: OrderMode = "2,1,3".parse().expect("fixed");
        assert_eq!(
            fixed,
            OrderMode::Fixed(ArimaOrder::new(2, 1, 3).expect("order"))
        );
        assert!("2,1".parse::<OrderMode>().is_err());
        assert!("a,b,c".parse::<OrderMode>().is_err());
    }

    #[test]
    fn invalid_window_rejected() {
        let overlay = ConfigOverlay {
            input: Some(PathBuf::from("data.csv")),
            horizon: Some(10),
            window: Some(14),
            ..Default::default()
        };
        assert!(matches!(
            overlay.resolve(),
            Err(PipelineError::Config(_))
        ));
    }

    #[test]
    fn toml_overlay_parses() {
        let text = r#"
input = "snapshot.csv"
countries = ["Avalon", "Eldorado"]
start = "2020-04-01"
end = "2020-09-12"
horizon = 30
level = 0.8
order = "auto"
caps = "7,2,7"
bic = "standard"
"#;
        let overlay: ConfigOverlay = toml::from_str(text).expect("toml");
        let cfg = overlay.resolve().expect("resolve");
        assert_eq!(cfg.countries, vec!["Avalon", "Eldorado"]);
        assert_eq!(cfg.bic_variant, BicVariant::Standard);
    }

    #[test]
    fn cli_overlay_wins_over_file() {
        let file = ConfigOverlay {
            input: Some(PathBuf::from("file.csv")),
            horizon: Some(20),
            ..Default::default()
        };
        let cli = ConfigOverlay {
            horizon: Some(45),
            ..Default::default()
        };
        let cfg = cli.or(file).resolve().expect("resolve");
        assert_eq!(cfg.input_path, PathBuf::from("file.csv"));
        assert_eq!(cfg.horizon, 45);
    }
}
