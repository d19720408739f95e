//! Quadrature variance `s1` of the cavity field for fig2a, fig2b and fig2c.
//!
//! ```text
//! cargo run --release --example quadrature_squeezing
//! ```

use exciton_cavity::observables::analytic_series;
use exciton_cavity::{AnalyticModel, Preset, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for preset in [Preset::Fig2a, Preset::Fig2b, Preset::Fig2c] {
        let cfg = RunConfig::from_preset(preset);
        let model = AnalyticModel::new(cfg.params.clone(), cfg.fock_space()?)?;
        let times: Vec<f64> = cfg.grid().iter().map(|wt| wt / cfg.params.omega).collect();
        let series = analytic_series(&model, &times)?;
        let (min, max) = (series.min_by(|r| r.s1), series.max_by(|r| r.s1));
        let last = series.rows.last().unwrap();
        println!(
            "{preset}: s1 in [{min:.5}, {max:.5}], s1({:.1}) = {:.5}, squeezed: {}",
            last.omega_t,
            last.s1,
            min < 0.0
        );
    }
    Ok(())
}
