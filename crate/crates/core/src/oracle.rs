//! Numerical integration of the block master equation.
//!
//! The four field-space blocks obey
//!
//! ```text
//! d/dt ee = { iA omega (P - M) - 2 B^2 k' + k (2J - M - P) } ee
//! d/dt eg = { -iA omega (M + P + 1) - B^2 k' + k (2J - M - P) } eg
//! d/dt ge = { +iA omega (M + P + 1) - B^2 k' + k (2J - M - P) } ge
//! d/dt gg = { iA omega (M - P) + k (2J - M - P) } gg + 2 B^2 k' ee
//! ```
//!
//! where `M`, `P` are diagonal in the Fock basis and `J` shifts both indices
//! by one. Two fixed-step schemes are provided: classical RK4 on the
//! equations as written, and classical RK4 in the interaction frame of the
//! diagonal part (an integrating-factor scheme), which removes the fast
//! `A omega (j + j')` rotations from the stepped variables.
//!
//! Nothing here knows about coherent states; the integrator is the
//! independent reference for the closed-form solution.

use ndarray::{Array2, Zip};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{DerivedCoefficients, SystemParams};
use crate::block::DensityBlock;
use crate::error::{Error, Result};
use crate::superop::sandwich;

/// Default integration step in units of `1/omega`.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Largest tolerated deviation between full-step and half-step runs.
pub const STEP_HALVING_THRESHOLD: f64 = 1e-6;
/// Largest tolerated population in the top two Fock levels.
pub const LEAK_THRESHOLD: f64 = 1e-8;
/// Trace and Hermiticity tolerance on emitted blocks.
pub const INVARIANT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum IntegratorMethod {
    /// RK4 on the interaction-frame variables.
    #[default]
    InteractionFrameRk4,
    /// RK4 on the block equations as written.
    ClassicalRk4,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub step: f64,
    pub t_max: f64,
    /// Number of uniform emission intervals on `[0, t_max]`.
    pub intervals: usize,
    pub fock_dim: usize,
    pub method: IntegratorMethod,
}

impl IntegratorConfig {
    pub fn new(t_max: f64, intervals: usize, fock_dim: usize) -> Self {
        Self {
            step: DEFAULT_STEP,
            t_max,
            intervals,
            fock_dim,
            method: IntegratorMethod::default(),
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.step = step;
        self
    }

    pub fn with_method(mut self, method: IntegratorMethod) -> Self {
        self.method = method;
        self
    }

    /// Step actually taken: the emission spacing divided evenly into
    /// substeps no longer than `step`.
    pub fn effective_step(&self) -> f64 {
        let dt = self.t_max / self.intervals as f64;
        dt / Self::substeps(dt, self.step) as f64
    }

    fn substeps(dt: f64, step: f64) -> usize {
        ((dt / step) - 1e-9).ceil().max(1.0) as usize
    }

    fn validate(&self) -> Result<()> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidConfig("integration step must be positive".into()));
        }
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidConfig("t_max must be positive".into()));
        }
        if self.intervals == 0 {
            return Err(Error::InvalidConfig("at least one time step is required".into()));
        }
        Ok(())
    }

    /// Step bound above which a warning is logged: `0.01/(A omega)` for the
    /// classical scheme, `0.1/(A omega)` in the interaction frame where only
    /// the slower coupling terms oscillate.
    pub fn recommended_step(&self, params: &SystemParams, coeffs: &DerivedCoefficients) -> f64 {
        let aw = coeffs.a_f64() * params.omega;
        match self.method {
            IntegratorMethod::ClassicalRk4 => 0.01 / aw,
            IntegratorMethod::InteractionFrameRk4 => 0.1 / aw,
        }
    }
}

/// Step-halving comparison attached to every oracle run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceCertificate {
    pub step: f64,
    pub half_step: f64,
    pub max_deviation: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct OracleRun {
    pub blocks: Vec<DensityBlock>,
    pub certificate: ConvergenceCertificate,
}

type State = [Array2<Complex64>; 4];

struct Rates {
    a_omega: f64,
    k: f64,
    /// `2 B^2 k'`, the excited-branch population decay rate.
    k_decay: f64,
}

impl Rates {
    fn new(params: &SystemParams, coeffs: &DerivedCoefficients) -> Self {
        Self {
            a_omega: coeffs.a_f64() * params.omega,
            k: params.k_field,
            k_decay: 2.0 * coeffs.b_squared() * params.k_mol,
        }
    }

    /// Diagonal part of the generator for block `b` (ee, eg, ge, gg) at element `(i, j)`.
    fn diagonal(&self, b: usize, i: usize, j: usize) -> Complex64 {
        let (fi, fj) = (i as f64, j as f64);
        let field = -self.k * (fi + fj);
        let (rot, decay) = match b {
            0 => (-self.a_omega * (fi - fj), -self.k_decay),
            1 => (-self.a_omega * (fi + fj + 1.0), -0.5 * self.k_decay),
            2 => (self.a_omega * (fi + fj + 1.0), -0.5 * self.k_decay),
            _ => (self.a_omega * (fi - fj), 0.0),
        };
        Complex64::new(field + decay, rot)
    }
}

fn block_state(b: &DensityBlock) -> State {
    [
        b.rho_ee.clone(),
        b.rho_eg.clone(),
        b.rho_ge.clone(),
        b.rho_gg.clone(),
    ]
}

fn state_block([ee, eg, ge, gg]: State, time: f64) -> DensityBlock {
    DensityBlock {
        rho_ee: ee,
        rho_eg: eg,
        rho_ge: ge,
        rho_gg: gg,
        time,
    }
}

/// Right-hand side of the block equations, written term by term.
pub fn block_derivative(
    block: &DensityBlock,
    params: &SystemParams,
    coeffs: &DerivedCoefficients,
) -> Result<DensityBlock> {
    block.check_shape()?;
    let rates = Rates::new(params, coeffs);
    let s = block_state(block);
    Ok(state_block(full_rhs(&rates, &s), block.time))
}

fn full_rhs(r: &Rates, s: &State) -> State {
    let d = s[0].nrows();
    let i_aw = Complex64::new(0.0, r.a_omega);
    let half_decay = 0.5 * r.k_decay;
    let dissip = |op: &Array2<Complex64>, i: usize, j: usize| {
        r.k * (2.0 * sandwich(op, i, j) - op[[i, j]] * (i + j) as f64)
    };
    let ee = Array2::from_shape_fn((d, d), |(i, j)| {
        let x = s[0][[i, j]];
        i_aw * x * (j as f64 - i as f64) - r.k_decay * x + dissip(&s[0], i, j)
    });
    let eg = Array2::from_shape_fn((d, d), |(i, j)| {
        let x = s[1][[i, j]];
        -i_aw * x * (i + j + 1) as f64 - half_decay * x + dissip(&s[1], i, j)
    });
    let ge = Array2::from_shape_fn((d, d), |(i, j)| {
        let x = s[2][[i, j]];
        i_aw * x * (i + j + 1) as f64 - half_decay * x + dissip(&s[2], i, j)
    });
    let gg = Array2::from_shape_fn((d, d), |(i, j)| {
        let x = s[3][[i, j]];
        i_aw * x * (i as f64 - j as f64) + dissip(&s[3], i, j) + r.k_decay * s[0][[i, j]]
    });
    [ee, eg, ge, gg]
}

/// Off-diagonal remainder after removing [`Rates::diagonal`]: the `2kJ`
/// jumps and the excited-to-ground feed.
fn coupling_rhs(r: &Rates, s: &State) -> State {
    let d = s[0].nrows();
    let jump = |op: &Array2<Complex64>| {
        Array2::from_shape_fn((d, d), |(i, j)| 2.0 * r.k * sandwich(op, i, j))
    };
    let mut gg = jump(&s[3]);
    gg.scaled_add(Complex64::new(r.k_decay, 0.0), &s[0]);
    [jump(&s[0]), jump(&s[1]), jump(&s[2]), gg]
}

fn axpy(y: &State, h: f64, k: &State) -> State {
    let hc = Complex64::new(h, 0.0);
    std::array::from_fn(|b| {
        let mut out = y[b].clone();
        out.scaled_add(hc, &k[b]);
        out
    })
}

fn scale(e: &State, y: &State) -> State {
    std::array::from_fn(|b| &e[b] * &y[b])
}

trait Stepper {
    fn step(&self, y: &State) -> State;
}

struct Classical<'a> {
    rates: &'a Rates,
    h: f64,
}

impl Stepper for Classical<'_> {
    fn step(&self, y: &State) -> State {
        let h = self.h;
        let k1 = full_rhs(self.rates, y);
        let k2 = full_rhs(self.rates, &axpy(y, 0.5 * h, &k1));
        let k3 = full_rhs(self.rates, &axpy(y, 0.5 * h, &k2));
        let k4 = full_rhs(self.rates, &axpy(y, h, &k3));
        std::array::from_fn(|b| {
            let mut out = y[b].clone();
            Zip::from(&mut out)
                .and(&k1[b])
                .and(&k2[b])
                .and(&k3[b])
                .and(&k4[b])
                .for_each(|o, a, bb, c, d| *o += h / 6.0 * (a + 2.0 * bb + 2.0 * c + d));
            out
        })
    }
}

struct InteractionFrame<'a> {
    rates: &'a Rates,
    h: f64,
    /// `exp(L0 h / 2)` element-wise for each block.
    half_prop: State,
}

impl<'a> InteractionFrame<'a> {
    fn new(rates: &'a Rates, h: f64, dim: usize) -> Self {
        let half_prop = std::array::from_fn(|b| {
            Array2::from_shape_fn((dim, dim), |(i, j)| (rates.diagonal(b, i, j) * (0.5 * h)).exp())
        });
        Self {
            rates,
            h,
            half_prop,
        }
    }
}

impl Stepper for InteractionFrame<'_> {
    fn step(&self, y: &State) -> State {
        let h = self.h;
        let e = &self.half_prop;
        let k1 = coupling_rhs(self.rates, y);
        let y_half = scale(e, y);
        let k2 = coupling_rhs(self.rates, &axpy(&y_half, 0.5 * h, &scale(e, &k1)));
        let k3 = coupling_rhs(self.rates, &axpy(&y_half, 0.5 * h, &k2));
        let k4 = coupling_rhs(self.rates, &scale(e, &axpy(&y_half, h, &k3)));
        // E^2 y + h/6 E^2 k1 + h/3 E (k2 + k3) + h/6 k4
        let inner: State = std::array::from_fn(|b| {
            let mut out = &e[b] * &axpy(y, h / 6.0, &k1)[b];
            Zip::from(&mut out)
                .and(&k2[b])
                .and(&k3[b])
                .for_each(|o, a, c| *o += h / 3.0 * (a + c));
            out
        });
        let outer = scale(e, &inner);
        axpy(&outer, h / 6.0, &k4)
    }
}

/// Integrates from `initial` and returns the blocks at the uniform emission
/// times `i * t_max / intervals`, `i = 0..=intervals`, without any checks.
pub fn propagate(
    initial: &DensityBlock,
    params: &SystemParams,
    coeffs: &DerivedCoefficients,
    cfg: &IntegratorConfig,
) -> Result<Vec<DensityBlock>> {
    cfg.validate()?;
    initial.check_shape()?;
    if initial.dim() != cfg.fock_dim {
        return Err(Error::DimensionMismatch {
            expected: cfg.fock_dim,
            found: initial.dim(),
        });
    }
    let rates = Rates::new(params, coeffs);
    let dt = cfg.t_max / cfg.intervals as f64;
    let substeps = IntegratorConfig::substeps(dt, cfg.step);
    let h = dt / substeps as f64;
    let stepper: Box<dyn Stepper + '_> = match cfg.method {
        IntegratorMethod::ClassicalRk4 => Box::new(Classical { rates: &rates, h }),
        IntegratorMethod::InteractionFrameRk4 => {
            Box::new(InteractionFrame::new(&rates, h, cfg.fock_dim))
        }
    };

    let t0 = initial.time;
    let mut y = block_state(initial);
    let mut out = Vec::with_capacity(cfg.intervals + 1);
    out.push(state_block(y.clone(), t0));
    for i in 1..=cfg.intervals {
        for _ in 0..substeps {
            y = stepper.step(&y);
        }
        out.push(state_block(y.clone(), t0 + i as f64 * dt));
    }
    Ok(out)
}

fn check_emitted(blocks: &[DensityBlock]) -> Result<()> {
    for b in blocks {
        let leak = b.top_population(2);
        if leak > LEAK_THRESHOLD {
            return Err(Error::TruncationLeak {
                population: leak,
                time: b.time,
            });
        }
        let tr = b.trace_error();
        if tr > INVARIANT_TOLERANCE {
            return Err(Error::InvariantViolated(format!(
                "trace error {tr:.3e} at omega*t = {}",
                b.time
            )));
        }
        let herm = b.hermiticity_residue();
        if herm > INVARIANT_TOLERANCE {
            return Err(Error::InvariantViolated(format!(
                "hermiticity residue {herm:.3e} at omega*t = {}",
                b.time
            )));
        }
    }
    Ok(())
}

fn max_run_deviation(a: &[DensityBlock], b: &[DensityBlock]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.max_deviation(y))
        .fold(0.0, f64::max)
}

/// Integrates, checks truncation and state invariants at every emitted time,
/// and certifies the run against a half-step rerun.
pub fn integrate(
    initial: &DensityBlock,
    params: &SystemParams,
    coeffs: &DerivedCoefficients,
    cfg: &IntegratorConfig,
) -> Result<OracleRun> {
    let bound = cfg.recommended_step(params, coeffs);
    if cfg.step > bound {
        log::warn!(
            "integration step {} exceeds the recommended bound {bound:.3e} for A*omega = {}",
            cfg.step,
            coeffs.a_f64() * params.omega
        );
    }
    let blocks = propagate(initial, params, coeffs, cfg)?;
    check_emitted(&blocks)?;
    let half_cfg = cfg.clone().with_step(cfg.step / 2.0);
    let fine = propagate(initial, params, coeffs, &half_cfg)?;
    let max_deviation = max_run_deviation(&blocks, &fine);
    let certificate = ConvergenceCertificate {
        step: cfg.effective_step(),
        half_step: half_cfg.effective_step(),
        max_deviation,
        threshold: STEP_HALVING_THRESHOLD,
        passed: max_deviation <= STEP_HALVING_THRESHOLD,
    };
    if !certificate.passed {
        return Err(Error::StepTooLarge {
            deviation: max_deviation,
            threshold: STEP_HALVING_THRESHOLD,
        });
    }
    Ok(OracleRun {
        blocks,
        certificate,
    })
}
