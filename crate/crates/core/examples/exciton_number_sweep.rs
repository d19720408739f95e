//! Half-filled sweep over the exciton number, then a validation report for
//! fig1a. Files go to a temporary directory.
//!
//! ```text
//! cargo run --release --example exciton_number_sweep
//! ```

use exciton_cavity::runner::{self, SweepAxis};
use exciton_cavity::{Observable, Preset, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("exciton_number_sweep");
    let mut base = RunConfig::from_preset(Preset::Fig4a);
    base.observables = vec![Observable::FyEq30, Observable::NPhoton];
    let index = runner::sweep(&base, SweepAxis::NTotal, &[10.0, 20.0, 50.0, 100.0], true, &dir)?;
    for line in index.summary_lines() {
        println!("{line}");
    }
    println!("index: {}", dir.join("index.json").display());

    let mut cfg = RunConfig::from_preset(Preset::Fig1a);
    cfg.out = dir.join("fig1a.csv");
    let report = runner::validate(&cfg)?;
    for line in report.summary_lines() {
        println!("{line}");
    }
    Ok(())
}
