//! Library surface of the positivity-rate pipeline: configuration, CSV
//! ingestion, per-country modelling, report emission, policy reading and the
//! numeric verification suite behind `posrate selftest`.

pub mod config;
pub mod error;
pub mod ingest;
pub mod pipeline;
pub mod policy;
pub mod report;
pub mod selftest;

pub use config::{BicVariant, ConfigOverlay, OrderMode, PipelineConfig};
pub use error::PipelineError;
pub use ingest::ingest_owid_csv;
pub use pipeline::{run_pipeline, BatchReport, CountryOutcome, CountryReport, ModelSummary};
pub use policy::{policy_recommendation, PolicyAdvice, Trend, Verdict};
pub use report::emit_reports;
