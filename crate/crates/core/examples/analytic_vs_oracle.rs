//! Integrates the block master equation for fig1a and compares it with the
//! closed-form blocks, for both integrator variants.
//!
//! ```text
//! cargo run --release --example analytic_vs_oracle
//! ```

use exciton_cavity::algebra::coherent_vector;
use exciton_cavity::{
    derive_coefficients, integrate, AnalyticModel, DensityBlock, IntegratorConfig,
    IntegratorMethod, Preset, RunConfig,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = RunConfig::from_preset(Preset::Fig1a);
    let p = &cfg.params;
    let co = derive_coefficients(p)?;
    let space = cfg.fock_space()?;
    let model = AnalyticModel::new(p.clone(), space)?;
    let initial = DensityBlock::product_initial(&coherent_vector(p.alpha, space)?);
    let (t_max, intervals) = (1.0, 100);

    for method in [IntegratorMethod::InteractionFrameRk4, IntegratorMethod::ClassicalRk4] {
        let icfg = IntegratorConfig::new(t_max, intervals, space.dim()).with_method(method);
        match integrate(&initial, p, &co, &icfg) {
            Ok(run) => {
                let dev = run
                    .blocks
                    .iter()
                    .map(|b| model.block(b.time).map(|a| a.max_deviation(b)))
                    .collect::<Result<Vec<_>, _>>()?
                    .into_iter()
                    .fold(0.0, f64::max);
                println!(
                    "{method:?}: max |oracle - analytic| = {dev:.3e}, step halving {:.3e}",
                    run.certificate.max_deviation
                );
            }
            Err(e) => println!("{method:?}: {e}"),
        }
    }
    Ok(())
}
