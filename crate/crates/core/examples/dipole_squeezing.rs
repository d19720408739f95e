//! Minimum of the dipole squeezing factor `F_y` (with and without the
//! `sigma_z` term) for the fig4 and fig5 presets on a dense grid.
//!
//! ```text
//! cargo run --release --example dipole_squeezing
//! ```

use exciton_cavity::observables::analytic_dipole_series;
use exciton_cavity::{AnalyticModel, Preset, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let presets = [
        Preset::Fig4a,
        Preset::Fig4b,
        Preset::Fig4c,
        Preset::Fig5a,
        Preset::Fig5b,
        Preset::Fig5c,
    ];
    for preset in presets {
        let cfg = RunConfig::from_preset(preset);
        let model = AnalyticModel::new(cfg.params.clone(), cfg.fock_space()?)?;
        // Fine enough to resolve the omega_eg carrier.
        let spacing = 1e-4;
        let n = (cfg.t_max / spacing).round() as usize;
        let times: Vec<f64> = (0..=n).map(|i| i as f64 * spacing / cfg.params.omega).collect();
        let fy = analytic_dipole_series(&model, &times)?;
        let min_with = fy.iter().map(|d| d.fy_with_sigma_z).fold(f64::INFINITY, f64::min);
        let min_without = fy.iter().map(|d| d.fy_without_sigma_z).fold(f64::INFINITY, f64::min);
        println!(
            "{preset}: A = {:>4}, B = {:.3}, min F_y = {min_with:>9.4} (without sigma_z {min_without:>9.4})",
            model.coeffs().a,
            model.coeffs().b
        );
        if let Some(note) = preset.note() {
            println!("  note: {note}");
        }
    }
    Ok(())
}
