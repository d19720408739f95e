//! Run configuration: presets, a flat TOML file and explicit overrides,
//! layered in that order.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::algebra::{FockSpace, SystemParams};
use crate::error::{Error, Result};
use crate::oracle::{IntegratorMethod, DEFAULT_STEP};
use crate::presets::Preset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    #[default]
    Analytic,
    Oracle,
    Both,
    /// Transcribed closed-form expressions, audited against the analytic state.
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

/// Selectable observable columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Observable {
    #[serde(rename = "s_total")]
    STotal,
    #[serde(rename = "s_field")]
    SField,
    #[serde(rename = "s_mol")]
    SMol,
    #[serde(rename = "s1")]
    S1,
    #[serde(rename = "Fy_eq30")]
    FyEq30,
    #[serde(rename = "Fy_eq31")]
    FyEq31,
    #[serde(rename = "n_photon")]
    NPhoton,
}

impl Observable {
    pub const ALL: [Observable; 7] = [
        Observable::STotal,
        Observable::SField,
        Observable::SMol,
        Observable::S1,
        Observable::FyEq30,
        Observable::FyEq31,
        Observable::NPhoton,
    ];

    pub fn column(self) -> &'static str {
        match self {
            Observable::STotal => "s_total",
            Observable::SField => "s_field",
            Observable::SMol => "s_mol",
            Observable::S1 => "s1",
            Observable::FyEq30 => "Fy_eq30",
            Observable::FyEq31 => "Fy_eq31",
            Observable::NPhoton => "n_photon",
        }
    }

    /// Parses a comma-separated list; `all` selects every column.
    pub fn parse_list(s: &str) -> Result<Vec<Observable>> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            if item.eq_ignore_ascii_case("all") {
                return Ok(Observable::ALL.to_vec());
            }
            out.push(item.parse()?);
        }
        if out.is_empty() {
            return Err(Error::InvalidConfig("empty observable selection".into()));
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.column())
    }
}

impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Observable::ALL
            .into_iter()
            .find(|o| o.column().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidConfig(format!("unknown observable '{s}'")))
    }
}

/// Optional settings from a config file or the command line. Keys mirror
/// the long flag names.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Overrides {
    /// Figure preset supplying every physical parameter.
    #[arg(long)]
    pub preset: Option<Preset>,
    #[arg(long, value_enum)]
    pub engine: Option<Engine>,
    /// Total number of molecules N.
    #[arg(long)]
    pub n_total: Option<u32>,
    /// Number of excited molecules n.
    #[arg(long)]
    pub n_excited: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_re: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_im: Option<f64>,
    /// Cavity damping k in units of omega.
    #[arg(long)]
    pub k: Option<f64>,
    /// Molecular damping k' in units of omega.
    #[arg(long)]
    pub kprime: Option<f64>,
    #[arg(long)]
    pub omega0: Option<f64>,
    #[arg(long)]
    pub omega_eg: Option<f64>,
    /// Bare coupling g; with --delta fixes omega = g^2/delta.
    #[arg(long)]
    pub g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    /// End of the uniform grid in omega t.
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Number of grid intervals.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub fock_dim: Option<usize>,
    /// Comma-separated columns, or `all`.
    #[arg(long)]
    pub observables: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Oracle integration step in omega t.
    #[arg(long)]
    pub step: Option<f64>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
}

/// Command-line spelling of [`IntegratorMethod`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    InteractionFrameRk4,
    ClassicalRk4,
}

impl From<MethodArg> for IntegratorMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::InteractionFrameRk4 => IntegratorMethod::InteractionFrameRk4,
            MethodArg::ClassicalRk4 => IntegratorMethod::ClassicalRk4,
        }
    }
}

impl Overrides {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::InvalidConfig(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Fields set in `top` replace those of `self`.
    pub fn layered(self, top: Overrides) -> Overrides {
        Overrides {
            preset: top.preset.or(self.preset),
            engine: top.engine.or(self.engine),
            n_total: top.n_total.or(self.n_total),
            n_excited: top.n_excited.or(self.n_excited),
            alpha_re: top.alpha_re.or(self.alpha_re),
            alpha_im: top.alpha_im.or(self.alpha_im),
            k: top.k.or(self.k),
            kprime: top.kprime.or(self.kprime),
            omega0: top.omega0.or(self.omega0),
            omega_eg: top.omega_eg.or(self.omega_eg),
            g: top.g.or(self.g),
            delta: top.delta.or(self.delta),
            tmax: top.tmax.or(self.tmax),
            steps: top.steps.or(self.steps),
            fock_dim: top.fock_dim.or(self.fock_dim),
            observables: top.observables.or(self.observables),
            format: top.format.or(self.format),
            out: top.out.or(self.out),
            step: top.step.or(self.step),
            method: top.method.or(self.method),
        }
    }
}

/// Fully resolved run description.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub preset: Option<Preset>,
    pub params: SystemParams,
    /// End of the grid in omega t.
    pub t_max: f64,
    /// Number of uniform intervals; the grid has `n_steps + 1` points.
    pub n_steps: usize,
    /// Explicit truncation; `None` uses the amplitude-based default.
    pub fock_dim: Option<usize>,
    pub engine: Engine,
    pub observables: Vec<Observable>,
    pub format: OutputFormat,
    pub out: PathBuf,
    /// Oracle step in omega t.
    pub step: f64,
    pub method: IntegratorMethod,
}

fn warn_override<T: PartialEq + fmt::Debug>(preset: Preset, key: &str, preset_value: T, flag: T) {
    if preset_value != flag {
        log::warn!("{key} = {flag:?} overrides preset {preset} value {preset_value:?}");
    }
}

impl RunConfig {
    /// Configuration of a preset with its default grid.
    pub fn from_preset(preset: Preset) -> Self {
        Self {
            preset: Some(preset),
            params: preset.params(),
            t_max: preset.t_max(),
            n_steps: preset.steps(),
            fock_dim: None,
            engine: Engine::default(),
            observables: Observable::ALL.to_vec(),
            format: OutputFormat::default(),
            out: PathBuf::from(format!("{preset}.csv")),
            step: DEFAULT_STEP,
            method: IntegratorMethod::default(),
        }
    }

    /// Applies layered overrides. Physical values that differ from the
    /// chosen preset are logged as warnings.
    pub fn resolve(o: &Overrides) -> Result<Self> {
        let mut cfg = match o.preset {
            Some(p) => Self::from_preset(p),
            None => {
                let (n_total, n_excited) = match (o.n_total, o.n_excited) {
                    (Some(a), Some(b)) => (a, b),
                    _ => {
                        return Err(Error::InvalidConfig(
                            "either a preset or both n-total and n-excited are required".into(),
                        ))
                    }
                };
                let mut c = Self::from_preset(Preset::Fig1a);
                c.preset = None;
                c.params = SystemParams::new(n_total, n_excited);
                c.out = PathBuf::from("run.csv");
                c
            }
        };
        if let Some(p) = o.preset {
            let base = p.params();
            let pairs: [(&str, Option<f64>, f64); 6] = [
                ("n-total", o.n_total.map(f64::from), base.n_total as f64),
                ("n-excited", o.n_excited.map(f64::from), base.n_excited as f64),
                ("alpha-re", o.alpha_re, base.alpha.re),
                ("alpha-im", o.alpha_im, base.alpha.im),
                ("k", o.k, base.k_field),
                ("kprime", o.kprime, base.k_mol),
            ];
            for (key, flag, value) in pairs {
                if let Some(f) = flag {
                    warn_override(p, key, value, f);
                }
            }
            for (key, flag, value) in [
                ("omega0", o.omega0, base.omega_0),
                ("omega-eg", o.omega_eg, base.omega_eg),
            ] {
                if let Some(f) = flag {
                    warn_override(p, key, value, f);
                }
            }
            if o.g.is_some() || o.delta.is_some() {
                log::warn!("bare couplings override the omega = 1 scale of preset {p}");
            }
        }
        let p = &mut cfg.params;
        if let Some(v) = o.n_total {
            p.n_total = v;
        }
        if let Some(v) = o.n_excited {
            p.n_excited = v;
        }
        p.alpha = Complex64::new(o.alpha_re.unwrap_or(p.alpha.re), o.alpha_im.unwrap_or(p.alpha.im));
        if let Some(v) = o.k {
            p.k_field = v;
        }
        if let Some(v) = o.kprime {
            p.k_mol = v;
        }
        if let Some(v) = o.omega0 {
            p.omega_0 = v;
        }
        if let Some(v) = o.omega_eg {
            p.omega_eg = v;
        }
        match (o.g, o.delta) {
            (Some(g), Some(d)) => *p = p.clone().with_bare_couplings(g, d),
            (None, None) => {}
            _ => {
                return Err(Error::InvalidConfig(
                    "g and delta must be given together".into(),
                ))
            }
        }
        if let Some(v) = o.tmax {
            cfg.t_max = v;
            if o.steps.is_none() {
                cfg.n_steps = (v / DEFAULT_STEP).round().max(1.0) as usize;
            }
        }
        if let Some(v) = o.steps {
            cfg.n_steps = v;
        }
        cfg.fock_dim = o.fock_dim.or(cfg.fock_dim);
        if let Some(e) = o.engine {
            cfg.engine = e;
        }
        if let Some(s) = &o.observables {
            cfg.observables = Observable::parse_list(s)?;
        }
        if let Some(f) = o.format {
            cfg.format = f;
            if o.out.is_none() {
                cfg.out.set_extension(f.extension());
            }
        }
        if let Some(out) = &o.out {
            cfg.out = out.clone();
        }
        if let Some(s) = o.step {
            cfg.step = s;
        }
        if let Some(m) = o.method {
            cfg.method = m.into();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.t_max.is_finite() && self.t_max > 0.0) {
            return Err(Error::InvalidConfig("tmax must be positive".into()));
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidConfig("steps must be at least 1".into()));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidConfig("step must be positive".into()));
        }
        if let Some(d) = self.fock_dim {
            FockSpace::new(d)?;
        }
        Ok(())
    }

    pub fn fock_space(&self) -> Result<FockSpace> {
        match self.fock_dim {
            Some(d) => FockSpace::new(d),
            None => Ok(FockSpace::for_amplitude(self.params.alpha)),
        }
    }

    /// Grid points in omega t.
    pub fn grid(&self) -> Vec<f64> {
        (0..=self.n_steps)
            .map(|i| self.t_max * i as f64 / self.n_steps as f64)
            .collect()
    }

    /// Path of the metadata record written next to the table.
    pub fn meta_path(&self) -> PathBuf {
        let stem = self
            .out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        self.out.with_file_name(format!("{stem}.meta.json"))
    }
}
