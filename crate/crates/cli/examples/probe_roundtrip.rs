// scratch probe
use posrate_cli::config::ConfigOverlay;
use posrate_cli::pipeline::BatchReport;
use posrate_cli::run_pipeline;
use std::path::PathBuf;

fn main() {
    let input = PathBuf::from("data/synthetic_owid.csv");
    let config = ConfigOverlay { input: Some(input), ..Default::default() }.resolve().unwrap();
    let batch = run_pipeline(&config).unwrap();
    let text = serde_json::to_string_pretty(&batch).unwrap();
    let parsed: BatchReport = serde_json::from_str(&text).unwrap();
    for (a, b) in batch.reports.iter().zip(&parsed.reports) {
        if a != b {
            let (ra, rb) = (a.report.as_ref().unwrap(), b.report.as_ref().unwrap());
            println!("country {} differs", a.country);
            if ra.adf != rb.adf { println!("  adf: {:?} vs {:?}", ra.adf, rb.adf); }
            if ra.order != rb.order { println!("  order"); }
            if ra.model != rb.model { println!("  model: {:?} vs {:?}", ra.model, rb.model); }
            if ra.ljung_box != rb.ljung_box { println!("  ljung"); }
            if ra.metrics != rb.metrics { println!("  metrics: {:?} vs {:?}", ra.metrics, rb.metrics); }
            if ra.forecast != rb.forecast { println!("  forecast"); }
            if ra.policy != rb.policy { println!("  policy: {:?} vs {:?}", ra.policy, rb.policy); }
            if ra.residuals != rb.residuals {
                for (i, (x, y)) in ra.residuals.iter().zip(&rb.residuals).enumerate() {
                    if x != y { println!("  residual[{i}]: {x:?} vs {y:?} bits {:x} {:x}", x.to_bits(), y.to_bits()); break; }
                }
            }
            if ra.residual_acf != rb.residual_acf { println!("  racf"); }
            if ra.histogram != rb.histogram { println!("  hist: {:?} vs {:?}", ra.histogram.bin_edges, rb.histogram.bin_edges); }
        }
    }
}
