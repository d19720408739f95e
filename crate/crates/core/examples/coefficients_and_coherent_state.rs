//! Derived coefficients of every preset and the truncated coherent state the
//! runs start from.
//!
//! ```text
//! cargo run --example coefficients_and_coherent_state
//! ```

use exciton_cavity::algebra::{coherent_tail_mass, truncated_coherent_vector};
use exciton_cavity::{derive_coefficients, FockSpace, Preset};
use num_complex::Complex64;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:<6} {:>4} {:>3} {:>6} {:>8} {:>8}", "preset", "N", "n", "A", "B", "q");
    for preset in Preset::ALL {
        let c = derive_coefficients(&preset.params())?;
        let (n_total, n_excited, _, _) = preset.table();
        println!(
            "{:<6} {n_total:>4} {n_excited:>3} {:>6} {:>8.4} {:>8.4}",
            preset.name(),
            c.a,
            c.b,
            c.q
        );
    }

    let alpha = Complex64::new(1.0, 0.0);
    let space = FockSpace::for_amplitude(alpha);
    let (psi, tail) = truncated_coherent_vector(alpha, space);
    println!("\nalpha = 1, default dim = {}, tail mass = {tail:.3e}", space.dim());
    for (n, c) in psi.iter().enumerate().take(6) {
        println!("  |{n}>  {:.6}  p = {:.6}", c.re, c.norm_sqr());
    }
    for dim in [5, 10, 15, 21] {
        println!("dim {dim:>2}: tail {:.3e}", coherent_tail_mass(alpha.norm_sqr(), dim));
    }
    Ok(())
}
