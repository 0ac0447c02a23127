use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand};
use posrate_cli::config::{parse_order, ConfigOverlay, OrderMode};
use posrate_cli::error::PipelineError;
use posrate_cli::{emit_reports, ingest_owid_csv, run_pipeline, selftest};
use posrate_core::{
    adf_test, difference, fit, forecast, impute_monthly_mean, select_order, simulate_arima,
    ArimaOrder,
};

#[derive(Parser)]
#[command(
    name = "posrate",
    version,
    about = "Box-Jenkins ARIMA pipeline for test-positivity time series"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write the report file set.
    Run(RunArgs),
    /// Augmented Dickey-Fuller unit-root test on one country's series.
    Adf(AdfArgs),
    /// Fit an ARIMA model to one country's series and print the summary.
    Fit(FitArgs),
    /// Fit and forecast one country's series; prints forecast CSV.
    Forecast(ForecastArgs),
    /// Generate a seeded ARIMA sample path; prints date,value CSV.
    Simulate(SimulateArgs),
    /// Run the built-in numeric verification suite.
    Selftest,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// OWID-schema CSV snapshot (columns date, location, positive_rate).
    #[arg(long)]
    input: Option<PathBuf>,
    /// TOML file supplying any of the run flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated country labels; defaults to all in the input.
    #[arg(long, value_delimiter = ',')]
    countries: Option<Vec<String>>,
    #[arg(long)]
    start: Option<NaiveDate>,
    #[arg(long)]
    end: Option<NaiveDate>,
    /// Forecast horizon in days.
    #[arg(long)]
    horizon: Option<usize>,
    /// Prediction-interval level in (0,1).
    #[arg(long)]
    level: Option<f64>,
    /// Positivity threshold in percent for the policy rule.
    #[arg(long)]
    threshold: Option<f64>,
    /// Observation window in days for the relaxation rule.
    #[arg(long)]
    window: Option<usize>,
    /// "auto" or a fixed "p,d,q".
    #[arg(long)]
    order: Option<String>,
    /// Auto-selection caps "p,d,q".
    #[arg(long)]
    caps: Option<String>,
    /// Search the ±1 neighborhood of the identified (p,q) by AIC.
    #[arg(long)]
    refine: bool,
    /// BIC definition in the tables: "paper" or "standard".
    #[arg(long)]
    bic: Option<String>,
    /// Output directory for the report files.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SeriesArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    country: String,
    #[arg(long, default_value = "2020-04-01")]
    start: NaiveDate,
    #[arg(long, default_value = "2020-09-12")]
    end: NaiveDate,
}

#[derive(Args, Clone)]
struct AdfArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// Lag order; defaults to floor((n-1)^(1/3)).
    #[arg(long)]
    lags: Option<usize>,
    /// Difference the series this many times before testing.
    #[arg(long, default_value_t = 0)]
    diff: usize,
}

#[derive(Args, Clone)]
struct FitArgs {
    #[command(flatten)]
    series: SeriesArgs,
    /// "auto" or a fixed "p,d,q".
    #[arg(long, default_value = "auto")]
    order: String,
    #[arg(long, default_value = "7,2,7")]
    caps: String,
    #[arg(long)]
    refine: bool,
}

#[derive(Args, Clone)]
struct ForecastArgs {
    #[command(flatten)]
    fit: FitArgs,
    #[arg(long, default_value_t = 30)]
    horizon: usize,
    #[arg(long, default_value_t = 0.80)]
    level: f64,
}

#[derive(Args, Clone)]
struct SimulateArgs {
    /// Model order "p,d,q".
    #[arg(long)]
    order: String,
    /// Comma-separated AR coefficients.
    #[arg(long, value_delimiter = ',')]
    phi: Option<Vec<f64>>,
    /// Comma-separated MA coefficients.
    #[arg(long, value_delimiter = ',')]
    theta: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.0)]
    mean: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, PipelineError> {
    match command {
        Command::Run(args) => run(args),
        Command::Adf(args) => adf(args),
        Command::Fit(args) => fit_command(args),
        Command::Forecast(args) => forecast_command(args),
        Command::Simulate(args) => simulate(args),
        Command::Selftest => Ok(run_selftest()),
    }
}

fn run(args: RunArgs) -> Result<ExitCode, PipelineError> {
    let from_cli = ConfigOverlay {
        input: args.input,
        countries: args.countries,
        start: args.start,
        end: args.end,
        horizon: args.horizon,
        level: args.level,
        threshold: args.threshold,
        window: args.window,
        order: args.order,
        caps: args.caps,
        refine: args.refine.then_some(true),
        bic: args.bic,
        output: args.output,
    };
    let overlay = match &args.config {
        Some(path) => from_cli.or(ConfigOverlay::from_toml_file(path)?),
        None => from_cli,
    };
    let config = overlay.resolve()?;

    let batch = run_pipeline(&config)?;
    let files = emit_reports(&batch, &config.output_dir, config.bic_variant)?;

    for outcome in &batch.reports {
        match (&outcome.report, &outcome.error) {
            (Some(report), _) => println!(
                "{}: order {} — {} (terminal forecast {:.2}%, test multiplier {:.2})",
                outcome.country,
                report.order,
                report.policy.verdict,
                report.forecast.terminal_point(),
                report.policy.required_test_multiplier,
            ),
            (None, Some(error)) => println!("{}: FAILED — {error}", outcome.country),
            (None, None) => unreachable!("outcome without report or error"),
        }
    }
    println!("wrote {} files to {}", files.len(), config.output_dir.display());

    if batch.all_succeeded() {
        Ok(ExitCode::SUCCESS)
    } else {
        let failures = batch.failures().count();
        eprintln!("{failures} of {} countries failed", batch.reports.len());
        Ok(ExitCode::from(2))
    }
}

fn load_series(args: &SeriesArgs) -> Result<posrate_core::TimeSeries, PipelineError> {
    let raw = ingest_owid_csv(&args.input, &args.country, args.start, args.end)?;
    Ok(impute_monthly_mean(&raw)?)
}

fn adf(args: AdfArgs) -> Result<ExitCode, PipelineError> {
    let series = load_series(&args.series)?;
    let tested = difference(&series, args.diff).map_err(PipelineError::from)?;
    let result = adf_test(&tested, args.lags).map_err(PipelineError::from)?;
    println!(
        "{} (d={}): statistic {:.4}, p {:.4}{}, lags {}, n {}",
        args.series.country,
        args.diff,
        result.statistic,
        result.p_value,
        if result.p_clamped { " (clamped)" } else { "" },
        result.lag_order,
        result.n_used,
    );
    println!(
        "{}",
        if result.is_stationary() {
            "stationary at the 5% level"
        } else {
            "fails to reject the unit root"
        }
    );
    Ok(ExitCode::SUCCESS)
}

fn resolve_order(
    series: &posrate_core::TimeSeries,
    order: &str,
    caps: &str,
    refine: bool,
) -> Result<ArimaOrder, PipelineError> {
    match OrderMode::from_str(order)? {
        OrderMode::Fixed(o) => Ok(o),
        OrderMode::Auto => {
            let caps = parse_order(caps)?;
            Ok(select_order(series, caps, refine)?.order)
        }
    }
}

fn fit_command(args: FitArgs) -> Result<ExitCode, PipelineError> {
    let series = load_series(&args.series)?;
    let order = resolve_order(&series, &args.order, &args.caps, args.refine)?;
    let model = fit(&series, order, None)?;
    let summary = posrate_cli::ModelSummary::from(&model);
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| PipelineError::Config(format!("cannot serialize summary: {e}")))?;
    println!("{json}");
    Ok(ExitCode::SUCCESS)
}

fn forecast_command(args: ForecastArgs) -> Result<ExitCode, PipelineError> {
    let series = load_series(&args.fit.series)?;
    let order = resolve_order(&series, &args.fit.order, &args.fit.caps, args.fit.refine)?;
    let model = fit(&series, order, None)?;
    let fc = forecast(&model, &series, args.horizon, args.level)?;
    println!("date,point,lower,upper");
    for (i, date) in fc.dates().iter().enumerate() {
        println!(
            "{date},{:.4},{:.4},{:.4}",
            fc.point[i], fc.lower[i], fc.upper[i]
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn simulate(args: SimulateArgs) -> Result<ExitCode, PipelineError> {
    let order = parse_order(&args.order)?;
    let phi = args.phi.unwrap_or_default();
    let theta = args.theta.unwrap_or_default();
    let series = simulate_arima(order, &phi, &theta, args.mean, args.sigma, args.n, args.seed)?;
    println!("date,value");
    for (date, value) in series.dates().iter().zip(series.values()) {
        println!("{date},{value}");
    }
    Ok(ExitCode::SUCCESS)
}

fn run_selftest() -> ExitCode {
    let outcomes = selftest::run_all();
    let mut all_passed = true;
    for outcome in &outcomes {
        println!("{outcome}");
        all_passed &= outcome.passed;
    }
    if all_passed {
        println!("all {} criteria passed", outcomes.len());
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(1)
    }
}
