//! Closed-form evolution of the block density operator.
//!
//! Starting from `(|e> + |g>)/sqrt(2) (x) |alpha>`, each molecular branch
//! carries a damped coherent state rotating with opposite sense,
//! `beta_e(t) = alpha e^{-kt} e^{-iA omega t}` and
//! `beta_g(t) = alpha e^{-kt} e^{+iA omega t}`. The coherence block picks up
//! the scalar factor `exp(Gamma + i Theta)`, and molecular decay feeds the
//! ground branch with a photon-number-resolved double sum.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{
    coherent_vector, derive_coefficients, DerivedCoefficients, FockSpace, SystemParams,
};
use crate::block::{DensityBlock, ReducedMolecularState};
use crate::error::Result;

/// `Gamma(t)` and `Theta(t)` at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseFunctions {
    pub gamma: f64,
    pub theta: f64,
    pub time: f64,
}

/// Real damping exponent `Gamma(t)` of the molecular coherence.
pub fn gamma_of_t(params: &SystemParams, coeffs: &DerivedCoefficients, t: f64) -> f64 {
    let k = params.k_field;
    let x0 = params.mean_photons();
    let aw = coeffs.a_f64() * params.omega;
    let decay = (-2.0 * k * t).exp();
    let (s, c) = (2.0 * aw * t).sin_cos();
    -x0 * (1.0 - decay) - (x0 * k / (k * k + aw * aw)) * (decay * (k * c - aw * s) - k)
}

/// Phase `Theta(t)` of the molecular coherence.
pub fn theta_of_t(params: &SystemParams, coeffs: &DerivedCoefficients, t: f64) -> f64 {
    let k = params.k_field;
    let x0 = params.mean_photons();
    let aw = coeffs.a_f64() * params.omega;
    let decay = (-2.0 * k * t).exp();
    let (s, c) = (2.0 * aw * t).sin_cos();
    -aw * t + (x0 * k / (k * k + aw * aw)) * (decay * (k * s + aw * c) - aw)
}

pub fn phase_functions(params: &SystemParams, coeffs: &DerivedCoefficients, t: f64) -> PhaseFunctions {
    PhaseFunctions {
        gamma: gamma_of_t(params, coeffs, t),
        theta: theta_of_t(params, coeffs, t),
        time: t,
    }
}

/// Feed factor of the ground block for photon indices `(j, jp)`:
/// `K / (-K + 2iA omega (jp - j)) (e^{-Kt} e^{2iA omega (jp - j) t} - 1)`
/// with `K = 2 B^2 k'`.
pub fn feed_factor(k_decay: f64, a_omega: f64, j: usize, jp: usize, t: f64) -> Complex64 {
    if j == jp {
        // Degenerate denominator: the factor reduces to 1 - e^{-Kt}, which is
        // also the k' -> 0 limit (zero).
        return Complex64::new(1.0 - (-k_decay * t).exp(), 0.0);
    }
    if k_decay == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let dj = jp as f64 - j as f64;
    let rate = Complex64::new(-k_decay, 2.0 * a_omega * dj);
    k_decay / rate * ((rate * t).exp() - 1.0)
}

/// Closed-form model for one parameter set on one truncated Fock space.
#[derive(Debug, Clone)]
pub struct AnalyticModel {
    params: SystemParams,
    coeffs: DerivedCoefficients,
    space: FockSpace,
}

impl AnalyticModel {
    pub fn new(params: SystemParams, space: FockSpace) -> Result<Self> {
        params.validate()?;
        let coeffs = derive_coefficients(&params)?;
        // Damped amplitudes never exceed |alpha|, so checking t = 0 suffices.
        coherent_vector(params.alpha, space)?;
        Ok(Self {
            params,
            coeffs,
            space,
        })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn coeffs(&self) -> &DerivedCoefficients {
        &self.coeffs
    }

    pub fn space(&self) -> FockSpace {
        self.space
    }

    fn a_omega(&self) -> f64 {
        self.coeffs.a_f64() * self.params.omega
    }

    /// Branch amplitudes `(beta_e, beta_g)` at time `t`.
    pub fn branch_amplitudes(&self, t: f64) -> (Complex64, Complex64) {
        let damped = self.params.alpha * (-self.params.k_field * t).exp();
        let rot = Complex64::from_polar(1.0, self.a_omega() * t);
        (damped * rot.conj(), damped * rot)
    }

    /// Scalar prefactor `1/2 e^{-B^2 k' t} e^{i Theta + Gamma}` of the coherence block.
    fn coherence_prefactor(&self, t: f64) -> Complex64 {
        let ph = phase_functions(&self.params, &self.coeffs, t);
        let damp = (-self.coeffs.b_squared() * self.params.k_mol * t).exp();
        0.5 * damp * Complex64::new(ph.gamma, ph.theta).exp()
    }

    fn branch_vectors(&self, t: f64) -> Result<(Array1<Complex64>, Array1<Complex64>)> {
        let (be, bg) = self.branch_amplitudes(t);
        Ok((
            coherent_vector(be, self.space)?,
            coherent_vector(bg, self.space)?,
        ))
    }

    /// The four closed-form blocks at time `t`.
    pub fn block(&self, t: f64) -> Result<DensityBlock> {
        let (ve, vg) = self.branch_vectors(t)?;
        let d = self.space.dim();
        let kd = 2.0 * self.coeffs.b_squared() * self.params.k_mol;
        let excited_weight = 0.5 * (-kd * t).exp();
        let coh = self.coherence_prefactor(t);
        let aw = self.a_omega();

        let rho_ee = Array2::from_shape_fn((d, d), |(i, j)| excited_weight * ve[i] * ve[j].conj());
        let rho_eg = Array2::from_shape_fn((d, d), |(i, j)| coh * ve[i] * vg[j].conj());
        let rho_ge = Array2::from_shape_fn((d, d), |(i, j)| coh.conj() * vg[i] * ve[j].conj());
        let rho_gg = Array2::from_shape_fn((d, d), |(i, j)| {
            let proj = 0.5 * vg[i] * vg[j].conj();
            proj * (1.0 + feed_factor(kd, aw, i, j, t))
        });
        Ok(DensityBlock {
            rho_ee,
            rho_eg,
            rho_ge,
            rho_gg,
            time: t,
        })
    }

    /// Reduced molecular state from block traces, without materializing
    /// the field matrices. Agrees with `block(t)?.reduced_molecular()`.
    pub fn molecular_state(&self, t: f64) -> Result<ReducedMolecularState> {
        let (ve, vg) = self.branch_vectors(t)?;
        let kd = 2.0 * self.coeffs.b_squared() * self.params.k_mol;
        let ne: f64 = ve.iter().map(|z| z.norm_sqr()).sum();
        let ng: f64 = vg.iter().map(|z| z.norm_sqr()).sum();
        let overlap: Complex64 = ve.iter().zip(vg.iter()).map(|(a, b)| a * b.conj()).sum();
        let excited_weight = 0.5 * (-kd * t).exp();
        let eg = self.coherence_prefactor(t) * overlap;
        let ee = excited_weight * ne;
        let gg = 0.5 * ng * (2.0 - (-kd * t).exp());
        Ok([
            [Complex64::new(ee, 0.0), eg],
            [eg.conj(), Complex64::new(gg, 0.0)],
        ])
    }
}

/// Closed-form blocks for explicit parameters; see [`AnalyticModel::block`].
pub fn analytic_block(
    params: &SystemParams,
    coeffs: &DerivedCoefficients,
    space: FockSpace,
    t: f64,
) -> Result<DensityBlock> {
    let model = AnalyticModel {
        params: params.clone(),
        coeffs: *coeffs,
        space,
    };
    coherent_vector(params.alpha, space)?;
    model.block(t)
}
