//! Runs a scenario file (default: the shipped Z^2-on-Z instance) and prints
//! the summary.

use std::path::PathBuf;

use coarse_cover::format::Scenario;
use coarse_cover::pipeline::{run_scenario, RunOptions};

fn main() -> coarse_cover::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/z2-over-z.example.json"));
    let scenario = Scenario::load(&path)?;
    let report = run_scenario(&scenario, &RunOptions::default())?;
    print!("{}", report.summary());
    Ok(())
}
