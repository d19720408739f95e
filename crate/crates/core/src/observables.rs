//! Figure-level observables computed from density blocks.
//!
//! Everything here works from the state itself (moments, traces, purities),
//! so the same code serves closed-form blocks and integrated blocks alike.

use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{DerivedCoefficients, FieldOperator, SystemParams};
use crate::analytic::AnalyticModel;
use crate::block::{trace_product, DensityBlock, ReducedMolecularState};
use crate::error::{Error, Result};

/// Trace and Hermiticity tolerance for state inputs.
pub const STATE_TOLERANCE: f64 = 1e-8;

/// Where a row of observables came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// State-based evaluation of the closed-form blocks.
    Analytic,
    /// State-based evaluation of integrated blocks.
    Oracle,
    /// Transcribed closed-form expressions.
    ClosedForm,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Analytic => "analytic",
            Source::Oracle => "oracle",
            Source::ClosedForm => "closed-form",
        }
    }
}

/// Observables at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableRow {
    pub omega_t: f64,
    pub s_total: f64,
    pub s_field: f64,
    pub s_mol: f64,
    pub s1: f64,
    /// Dipole indicator including the `|<sigma_z>|` term.
    pub fy_eq30: f64,
    /// Dipole indicator without the `|<sigma_z>|` term.
    pub fy_eq31: f64,
    pub n_photon: f64,
    pub trace_err: f64,
    pub purity_total: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableSeries {
    pub source: Source,
    pub rows: Vec<ObservableRow>,
}

impl ObservableSeries {
    pub fn min_by(&self, f: impl Fn(&ObservableRow) -> f64) -> f64 {
        self.rows.iter().map(f).fold(f64::INFINITY, f64::min)
    }

    pub fn max_by(&self, f: impl Fn(&ObservableRow) -> f64) -> f64 {
        self.rows.iter().map(f).fold(f64::NEG_INFINITY, f64::max)
    }
}

fn check_state(rho: &Array2<Complex64>) -> Result<()> {
    let (r, c) = rho.dim();
    if r != c {
        return Err(Error::NotAState(format!("matrix is {r}x{c}, not square")));
    }
    let tr: Complex64 = rho.diag().sum();
    if (tr - 1.0).norm() > STATE_TOLERANCE {
        return Err(Error::NotAState(format!("trace {tr} differs from 1")));
    }
    let mut herm = 0.0f64;
    for i in 0..r {
        for j in i..r {
            herm = herm.max((rho[[i, j]] - rho[[j, i]].conj()).norm());
        }
    }
    if herm > STATE_TOLERANCE {
        return Err(Error::NotAState(format!("hermiticity residue {herm:.3e}")));
    }
    Ok(())
}

/// 2x2 matrix view of a reduced molecular state.
pub fn molecular_matrix(rm: &ReducedMolecularState) -> Array2<Complex64> {
    Array2::from_shape_fn((2, 2), |(i, j)| rm[i][j])
}

/// Linear entropy `1 - Tr rho^2`.
pub fn linear_entropy(rho: &Array2<Complex64>) -> Result<f64> {
    check_state(rho)?;
    let p = trace_product(rho, rho);
    if p.im.abs() > 1e-10 {
        return Err(Error::NotAState(format!(
            "Tr rho^2 has imaginary part {:.3e}",
            p.im
        )));
    }
    Ok(1.0 - p.re)
}

/// First and second moments `(<a>, <a^2>, <a^dagger a>)` of a field state.
fn field_moments(rho: &FieldOperator) -> (Complex64, Complex64, f64) {
    let d = rho.nrows();
    let mut a1 = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut n = 0.0;
    for i in 0..d {
        n += i as f64 * rho[[i, i]].re;
        if i + 1 < d {
            a1 += ((i + 1) as f64).sqrt() * rho[[i + 1, i]];
        }
        if i + 2 < d {
            a2 += (((i + 1) * (i + 2)) as f64).sqrt() * rho[[i + 2, i]];
        }
    }
    (a1, a2, n)
}

/// Quadrature squeezing parameter `s1 = 4 <(Delta X1)^2> - 1` for
/// `X1 = (a e^{i omega_0 t} + a^dagger e^{-i omega_0 t}) / 2`. Negative values
/// signal squeezing.
pub fn quadrature_s1(rho_f: &FieldOperator, t: f64, omega_0: f64) -> Result<f64> {
    check_state(rho_f)?;
    let (a1, a2, n) = field_moments(rho_f);
    let phase = Complex64::from_polar(1.0, omega_0 * t);
    let mean_x = (a1 * phase).re;
    Ok(2.0 * n + 2.0 * (a2 * phase * phase).re - 4.0 * mean_x * mean_x)
}

/// `Tr(a^dagger a rho)`.
pub fn mean_photon_number(rho_f: &FieldOperator) -> Result<f64> {
    check_state(rho_f)?;
    Ok(field_moments(rho_f).2)
}

/// Dipole-squeezing quantities for the absorptive polarization component.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DipoleSqueezing {
    pub sigma_y: f64,
    /// `<|e><e| - |g><g|>` on the two-state subspace.
    pub sigma_z: f64,
    /// `1 - 4 <sigma_y>^2 - |<sigma_z>|`.
    pub fy_with_sigma_z: f64,
    /// `1 - 4 <sigma_y>^2`.
    pub fy_without_sigma_z: f64,
}

/// Dipole squeezing from the reduced molecular state, with the exciton
/// operator restricted to `b_q -> B |g><e|` and the rotating phases
/// `e^{+-i omega_eg t}`.
pub fn dipole_squeezing(
    rho_m: &ReducedMolecularState,
    t: f64,
    omega_eg: f64,
    b: f64,
) -> Result<DipoleSqueezing> {
    check_state(&molecular_matrix(rho_m))?;
    let lower = b * rho_m[0][1];
    let raise = b * rho_m[1][0];
    let ph = Complex64::from_polar(1.0, omega_eg * t);
    let sy = (raise * ph.conj() - lower * ph) / Complex64::new(0.0, 2.0);
    let sz = (rho_m[0][0] - rho_m[1][1]).re;
    let var = 4.0 * sy.re * sy.re;
    Ok(DipoleSqueezing {
        sigma_y: sy.re,
        sigma_z: sz,
        fy_with_sigma_z: 1.0 - var - sz.abs(),
        fy_without_sigma_z: 1.0 - var,
    })
}

/// All observables of one block set.
pub fn evaluate_block(
    block: &DensityBlock,
    params: &SystemParams,
    coeffs: &DerivedCoefficients,
    source: Source,
) -> Result<ObservableRow> {
    block.check_shape()?;
    let herm = block.hermiticity_residue();
    if herm > STATE_TOLERANCE {
        return Err(Error::NotAState(format!("hermiticity residue {herm:.3e}")));
    }
    let trace_err = block.trace_error();
    if trace_err > STATE_TOLERANCE {
        return Err(Error::NotAState(format!("trace error {trace_err:.3e}")));
    }
    let t = block.time;
    let rho_f = block.reduced_field();
    let rho_m = block.reduced_molecular();
    let purity_total = block.purity();
    let dip = dipole_squeezing(&rho_m, t, params.omega_eg, coeffs.b)?;
    Ok(ObservableRow {
        omega_t: t * params.omega,
        s_total: 1.0 - purity_total,
        s_field: linear_entropy(&rho_f)?,
        s_mol: linear_entropy(&molecular_matrix(&rho_m))?,
        s1: quadrature_s1(&rho_f, t, params.omega_0)?,
        fy_eq30: dip.fy_with_sigma_z,
        fy_eq31: dip.fy_without_sigma_z,
        n_photon: mean_photon_number(&rho_f)?,
        trace_err,
        purity_total,
        source,
    })
}

/// Evaluates a sequence of blocks in parallel.
pub fn evaluate_blocks(
    blocks: &[DensityBlock],
    params: &SystemParams,
    coeffs: &DerivedCoefficients,
    source: Source,
) -> Result<ObservableSeries> {
    let rows = blocks
        .par_iter()
        .map(|b| evaluate_block(b, params, coeffs, source))
        .collect::<Result<Vec<_>>>()?;
    Ok(ObservableSeries { source, rows })
}

/// Closed-form blocks evaluated on a time grid, in parallel.
pub fn analytic_series(model: &AnalyticModel, times: &[f64]) -> Result<ObservableSeries> {
    let rows = times
        .par_iter()
        .map(|&t| {
            let b = model.block(t)?;
            evaluate_block(&b, model.params(), model.coeffs(), Source::Analytic)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ObservableSeries {
        source: Source::Analytic,
        rows,
    })
}

/// Dipole squeezing of the closed-form state on a time grid, from block
/// traces only. Suited to the long, dense grids the fast dipole
/// oscillations require.
pub fn analytic_dipole_series(model: &AnalyticModel, times: &[f64]) -> Result<Vec<DipoleSqueezing>> {
    let p = model.params();
    let b = model.coeffs().b;
    times
        .par_iter()
        .map(|&t| dipole_squeezing(&model.molecular_state(t)?, t, p.omega_eg, b))
        .collect()
}
