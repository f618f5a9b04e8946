//! Runs the whole pipeline on the bundled fixtures and prints the
//! per-category sentiment and emotion tables.
//!
//!     cargo run --release --example sentiment_report -- [OUT_DIR]

use std::path::PathBuf;

use opioid_lens::config::{Overrides, PipelineConfig};
use opioid_lens::pipeline::{run_subcommand, Stage};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("opioid-lens-report"));
    let overrides = Overrides {
        output_dir: Some(out.clone()),
        ..Default::default()
    };
    let cfg = PipelineConfig::load(
        concat!(env!("CARGO_MANIFEST_DIR"), "/data/fixtures/pipeline.toml"),
        &overrides,
    )?;
    let run = run_subcommand(Stage::Pipeline, &cfg)?;
    for line in &run.log {
        eprintln!("{line}");
    }
    println!(
        "{}",
        std::fs::read_to_string(out.join("sentiment_report.csv"))?
    );
    println!(
        "{}",
        std::fs::read_to_string(out.join("emotion_report.csv"))?
    );
    println!("chart: {}", out.join("emotions.svg").display());
    Ok(())
}
