//! System parameters, q-deformed coefficients and truncated Fock-space
//! construction.
//!
//! The molecular subsystem is restricted to the two collective states
//! `|n, m>` and `|n-1, m+1>` (with `m = N - n`), so the q-deformed exciton
//! operator only ever enters through the single matrix element
//! `B = sqrt(n (m + 1) / N)`. The cavity field lives on a truncated photon
//! number basis `{|0>, ..., |dim-1>}`.

use ndarray::{Array1, Array2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense complex matrix on the truncated photon Fock space.
pub type FieldOperator = Array2<Complex64>;

/// Default tolerance on the coherent-state probability mass lost to truncation.
pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;

/// Factor by which `|delta|/g` must exceed `sqrt(n_ph + 1)` to count as dispersive.
pub const DISPERSIVE_MARGIN: f64 = 10.0;

/// Physical constants of one run. Frequencies and rates are in units of the
/// dispersive scale `omega = g^2 / delta`; the number of ground-state
/// molecules is always derived as `n_total - n_excited`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub n_total: u32,
    pub n_excited: u32,
    /// Dispersive scale `omega = g^2 / delta`.
    pub omega: f64,
    pub g_coupling: Option<f64>,
    pub delta_detuning: Option<f64>,
    /// Cavity frequency; only enters quadrature phase factors.
    pub omega_0: f64,
    /// Molecular splitting; only enters dipole phase factors.
    pub omega_eg: f64,
    /// Cavity dissipation constant `k`.
    pub k_field: f64,
    /// Molecular dissipation constant `k'`.
    pub k_mol: f64,
    /// Coherent amplitude of the initial field.
    pub alpha: Complex64,
}

impl SystemParams {
    /// Parameters with `omega = 1`, no damping, `alpha = 1` and the default
    /// presentation frequencies `omega_0 = 10 omega`, `omega_eg = omega_0 + 100 omega`.
    pub fn new(n_total: u32, n_excited: u32) -> Self {
        Self {
            n_total,
            n_excited,
            omega: 1.0,
            g_coupling: None,
            delta_detuning: None,
            omega_0: 10.0,
            omega_eg: 110.0,
            k_field: 0.0,
            k_mol: 0.0,
            alpha: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_damping(mut self, k_field: f64, k_mol: f64) -> Self {
        self.k_field = k_field;
        self.k_mol = k_mol;
        self
    }

    pub fn with_alpha(mut self, alpha: Complex64) -> Self {
        self.alpha = alpha;
        self
    }

    /// Sets the bare coupling and detuning, and the dispersive scale `g^2/delta`.
    pub fn with_bare_couplings(mut self, g: f64, delta: f64) -> Self {
        self.g_coupling = Some(g);
        self.delta_detuning = Some(delta);
        self.omega = g * g / delta;
        self
    }

    /// Number of ground-state molecules `m = N - n`.
    pub fn n_ground(&self) -> u32 {
        self.n_total.saturating_sub(self.n_excited)
    }

    /// Mean photon number `|alpha|^2` of the initial coherent field.
    pub fn mean_photons(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if self.n_total < 1 {
            return bad("N_total must be at least 1");
        }
        if self.n_excited < 1 {
            return bad("n_excited must be at least 1");
        }
        if self.n_excited > self.n_total {
            return bad("n_excited > N_total");
        }
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return bad("omega must be positive and finite");
        }
        for (name, v) in [("k", self.k_field), ("kprime", self.k_mol)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be nonnegative and finite"
                )));
            }
        }
        for (name, v) in [("omega0", self.omega_0), ("omega_eg", self.omega_eg)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be nonnegative and finite"
                )));
            }
        }
        if !(self.alpha.re.is_finite() && self.alpha.im.is_finite()) {
            return bad("alpha must be finite");
        }
        if let Some(g) = self.g_coupling {
            if !(g.is_finite() && g > 0.0) {
                return bad("g must be positive");
            }
        }
        if let Some(d) = self.delta_detuning {
            if !(d.is_finite() && d != 0.0) {
                return bad("delta must be nonzero");
            }
        }
        if let (Some(g), Some(d)) = (self.g_coupling, self.delta_detuning) {
            let implied = g * g / d;
            if ((implied - self.omega) / self.omega).abs() > 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "omega = {} is inconsistent with g^2/delta = {implied}",
                    self.omega
                )));
            }
        }
        Ok(())
    }
}

/// Coefficients derived from the molecule counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedCoefficients {
    /// Deformation parameter `q = 1 - 2/N`.
    pub q: f64,
    /// Dispersive shift multiplier `A = n (m + 1)`.
    pub a: u64,
    /// Exciton matrix element `B = sqrt(A / N)`.
    pub b: f64,
    pub n_total: u32,
}

impl DerivedCoefficients {
    /// `B^2 = A / N`, evaluated without going through the square root.
    pub fn b_squared(&self) -> f64 {
        self.a as f64 / self.n_total as f64
    }

    pub fn a_f64(&self) -> f64 {
        self.a as f64
    }
}

pub fn derive_coefficients(params: &SystemParams) -> Result<DerivedCoefficients> {
    if params.n_total < 1 {
        return Err(Error::InvalidConfig("N_total must be at least 1".into()));
    }
    if params.n_excited < 1 {
        return Err(Error::InvalidConfig("n_excited must be at least 1".into()));
    }
    if params.n_excited > params.n_total {
        return Err(Error::InvalidConfig("n_excited > N_total".into()));
    }
    let n = params.n_total as f64;
    let a = params.n_excited as u64 * (params.n_ground() as u64 + 1);
    Ok(DerivedCoefficients {
        q: 1.0 - 2.0 / n,
        a,
        b: (a as f64 / n).sqrt(),
        n_total: params.n_total,
    })
}

/// Truncated photon-number basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FockSpace {
    dim: usize,
}

impl FockSpace {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidConfig(format!(
                "fock dimension must be at least 2, got {dim}"
            )));
        }
        Ok(Self { dim })
    }

    /// Default truncation `ceil(|alpha|^2 + 10 sqrt(|alpha|^2 + 1)) + 5`.
    pub fn for_amplitude(alpha: Complex64) -> Self {
        let mean = alpha.norm_sqr();
        let dim = (mean + 10.0 * (mean + 1.0).sqrt()).ceil() as usize + 5;
        Self { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Bosonic annihilation operator with `<j-1|a|j> = sqrt(j)`.
pub fn annihilation_operator(space: FockSpace) -> FieldOperator {
    let d = space.dim();
    let mut a = Array2::zeros((d, d));
    for j in 1..d {
        a[[j - 1, j]] = Complex64::new((j as f64).sqrt(), 0.0);
    }
    a
}

/// Number operator `a^dagger a`, diagonal with entries `0, 1, ..., dim-1`.
pub fn number_operator(space: FockSpace) -> FieldOperator {
    let d = space.dim();
    Array2::from_diag(&Array1::from_iter(
        (0..d).map(|j| Complex64::new(j as f64, 0.0)),
    ))
}

/// Poisson probability mass `sum_{j >= dim} e^{-x} x^j / j!` lost to truncation.
///
/// Summed directly from `j = dim` upward in log space so that tiny tails are
/// not swamped by cancellation against the retained mass.
pub fn coherent_tail_mass(mean_photons: f64, dim: usize) -> f64 {
    let x = mean_photons;
    if x == 0.0 {
        return 0.0;
    }
    let ln_x = x.ln();
    let ln_fact: f64 = (1..=dim).map(|j| (j as f64).ln()).sum();
    let mut ln_term = -x + dim as f64 * ln_x - ln_fact;
    let mut total = 0.0;
    let mut j = dim;
    loop {
        let term = ln_term.exp();
        total += term;
        j += 1;
        ln_term += ln_x - (j as f64).ln();
        if j as f64 > x && ln_term.exp() <= total * 1e-17 {
            break;
        }
        if j > dim + 100_000 {
            break;
        }
    }
    total
}

/// Glauber coherent state components `c_j = e^{-|alpha|^2/2} alpha^j / sqrt(j!)`
/// on the truncated basis, together with the truncated tail mass. No
/// truncation check is made.
pub fn truncated_coherent_vector(alpha: Complex64, space: FockSpace) -> (Array1<Complex64>, f64) {
    let d = space.dim();
    let mut c = Array1::zeros(d);
    c[0] = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for j in 1..d {
        c[j] = c[j - 1] * alpha / (j as f64).sqrt();
    }
    (c, coherent_tail_mass(alpha.norm_sqr(), d))
}

pub fn coherent_vector_with_tolerance(
    alpha: Complex64,
    space: FockSpace,
    tolerance: f64,
) -> Result<Array1<Complex64>> {
    let (c, tail_mass) = truncated_coherent_vector(alpha, space);
    if tail_mass > tolerance {
        return Err(Error::TruncationTooSmall {
            dim: space.dim(),
            tail_mass,
            tolerance,
        });
    }
    Ok(c)
}

/// Coherent state `|alpha>` with the default tail tolerance.
pub fn coherent_vector(alpha: Complex64, space: FockSpace) -> Result<Array1<Complex64>> {
    coherent_vector_with_tolerance(alpha, space, DEFAULT_TAIL_TOLERANCE)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DispersiveStatus {
    Valid,
    Violated,
}

/// Result of comparing `|delta|/g` with `sqrt(n_ph + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersiveValidity {
    pub ratio: f64,
    pub bound: f64,
    pub margin: f64,
    pub status: DispersiveStatus,
}

/// Checks the large-detuning condition with `n_ph = |alpha|^2`.
///
/// The condition is reported, never enforced: `ratio >= 10 * bound` is
/// labelled valid, anything less a violation.
pub fn check_dispersive_validity(params: &SystemParams) -> Result<DispersiveValidity> {
    let (g, delta) = match (params.g_coupling, params.delta_detuning) {
        (Some(g), Some(d)) => (g, d),
        _ => return Err(Error::MissingBareCouplings),
    };
    let ratio = delta.abs() / g;
    let bound = (params.mean_photons() + 1.0).sqrt();
    let status = if ratio >= DISPERSIVE_MARGIN * bound {
        DispersiveStatus::Valid
    } else {
        DispersiveStatus::Violated
    };
    Ok(DispersiveValidity {
        ratio,
        bound,
        margin: DISPERSIVE_MARGIN,
        status,
    })
}
