//! Linear entropies of fig1a, fig1b and fig1c at the first revivals and
//! half-revivals, and the total entropy at late times.
//!
//! ```text
//! cargo run --release --example entropies
//! ```

use std::f64::consts::PI;

use exciton_cavity::observables::analytic_series;
use exciton_cavity::{AnalyticModel, Preset, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for preset in [Preset::Fig1a, Preset::Fig1b, Preset::Fig1c] {
        let cfg = RunConfig::from_preset(preset);
        let model = AnalyticModel::new(cfg.params.clone(), cfg.fock_space()?)?;
        let a = model.coeffs().a_f64();
        let times: Vec<f64> = (0..=6).map(|j| PI * j as f64 / (2.0 * a)).chain([50.0, 200.0]).collect();
        let series = analytic_series(&model, &times)?;
        println!("{preset}: A = {a}");
        println!("  {:>9} {:>9} {:>9} {:>9}", "omega t", "S_total", "S_field", "S_mol");
        for r in &series.rows {
            println!(
                "  {:>9.4} {:>9.5} {:>9.5} {:>9.5}",
                r.omega_t, r.s_total, r.s_field, r.s_mol
            );
        }
    }
    Ok(())
}
