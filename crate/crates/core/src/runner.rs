//! Runs, sweeps and validation reports with deterministic file output.
//!
//! A run writes one observable table (CSV or JSON) and one `.meta.json`
//! record next to it. Identical configurations produce byte-identical files.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{
    check_dispersive_validity, coherent_vector, derive_coefficients, truncated_coherent_vector,
    DerivedCoefficients, DispersiveStatus, DispersiveValidity,
};
use crate::analytic::AnalyticModel;
use crate::block::{DensityBlock, StateDiagnostics};
use crate::closed_form::{audit, closed_form_row, AuditRecord, AuditStatus};
use crate::config::{Engine, Observable, OutputFormat, RunConfig};
use crate::error::{Error, Result};
use crate::observables::{analytic_series, evaluate_blocks, ObservableRow, ObservableSeries, Source};
use crate::oracle::{integrate, ConvergenceCertificate, IntegratorConfig, OracleRun};

/// Oracle/analytic agreement required by `validate`.
pub const BLOCK_DEVIATION_THRESHOLD: f64 = 1e-6;
/// Per-observable agreement required by `validate`.
pub const OBSERVABLE_DEVIATION_THRESHOLD: f64 = 1e-6;
pub const ANALYTIC_TRACE_THRESHOLD: f64 = 1e-10;
pub const ORACLE_TRACE_THRESHOLD: f64 = 1e-8;
pub const HERMITICITY_THRESHOLD: f64 = 1e-8;
pub const POSITIVITY_THRESHOLD: f64 = -1e-9;

/// One line of the observable table. Column order is fixed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub omega_t: f64,
    pub s_total: Option<f64>,
    pub s_field: Option<f64>,
    pub s_mol: Option<f64>,
    pub s1: Option<f64>,
    #[serde(rename = "Fy_eq30")]
    pub fy_eq30: Option<f64>,
    #[serde(rename = "Fy_eq31")]
    pub fy_eq31: Option<f64>,
    pub n_photon: Option<f64>,
    pub trace_err: Option<f64>,
    pub purity_total: Option<f64>,
    pub engine: &'static str,
}

pub const COLUMNS: [&str; 11] = [
    "omega_t",
    "s_total",
    "s_field",
    "s_mol",
    "s1",
    "Fy_eq30",
    "Fy_eq31",
    "n_photon",
    "trace_err",
    "purity_total",
    "engine",
];

impl TableRow {
    fn from_row(r: &ObservableRow, selected: &[Observable]) -> Self {
        let pick = |o: Observable, v: f64| selected.contains(&o).then_some(v);
        let state_based = r.source != Source::ClosedForm;
        TableRow {
            omega_t: r.omega_t,
            s_total: pick(Observable::STotal, r.s_total),
            s_field: pick(Observable::SField, r.s_field),
            s_mol: pick(Observable::SMol, r.s_mol),
            s1: pick(Observable::S1, r.s1),
            fy_eq30: pick(Observable::FyEq30, r.fy_eq30),
            fy_eq31: pick(Observable::FyEq31, r.fy_eq31),
            n_photon: pick(Observable::NPhoton, r.n_photon),
            trace_err: state_based.then_some(r.trace_err),
            purity_total: state_based.then_some(r.purity_total),
            engine: r.source.label(),
        }
    }
}

/// Extremes of one series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesSummary {
    pub engine: Source,
    pub rows: usize,
    pub min_fy_eq30: f64,
    pub min_fy_eq31: f64,
    pub min_s1: f64,
    pub max_s_total: f64,
    pub max_s_field: f64,
    pub max_s_mol: f64,
    pub max_trace_err: f64,
}

impl SeriesSummary {
    pub fn of(series: &ObservableSeries) -> Self {
        Self {
            engine: series.source,
            rows: series.rows.len(),
            min_fy_eq30: series.min_by(|r| r.fy_eq30),
            min_fy_eq31: series.min_by(|r| r.fy_eq31),
            min_s1: series.min_by(|r| r.s1),
            max_s_total: series.max_by(|r| r.s_total),
            max_s_field: series.max_by(|r| r.s_field),
            max_s_mol: series.max_by(|r| r.s_mol),
            max_trace_err: series.max_by(|r| r.trace_err),
        }
    }
}

/// Dispersive-limit check, or a marker when no bare couplings were given.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DispersiveReport {
    Checked(DispersiveValidity),
    Unchecked(&'static str),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunMetadata {
    pub config: RunConfig,
    pub coefficients: DerivedCoefficients,
    pub fock_dim: usize,
    pub dispersive_validity: DispersiveReport,
    pub certificate: Option<ConvergenceCertificate>,
    pub oracle_analytic_max_deviation: Option<f64>,
    pub audit: Vec<AuditRecord>,
    pub summary: Vec<SeriesSummary>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub table_path: PathBuf,
    pub meta_path: PathBuf,
    pub metadata: RunMetadata,
    pub series: Vec<ObservableSeries>,
}

impl RunOutcome {
    /// Minimum of `Fy_eq30` over the first state-based series.
    pub fn min_fy(&self) -> Option<f64> {
        self.metadata
            .summary
            .iter()
            .find(|s| s.engine != Source::ClosedForm)
            .map(|s| s.min_fy_eq30)
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let m = &self.metadata;
        let mut lines = vec![format!(
            "wrote {} and {}",
            self.table_path.display(),
            self.meta_path.display()
        )];
        for s in &m.summary {
            lines.push(format!(
                "{}: {} rows, max s_total {:.6e}, max s_field {:.6e}, max s_mol {:.6e}, min s1 {:.6e}",
                s.engine.label(),
                s.rows,
                s.max_s_total,
                s.max_s_field,
                s.max_s_mol,
                s.min_s1
            ));
        }
        if let Some(fy) = self.min_fy() {
            let verdict = if fy >= 0.0 {
                "no dipole squeezing"
            } else {
                "dipole squeezing"
            };
            lines.push(format!("min F_y = {fy:.6e} ({verdict})"));
        }
        if let Some(d) = m.oracle_analytic_max_deviation {
            lines.push(format!("oracle/analytic max block deviation = {d:.3e}"));
        }
        if let Some(c) = &m.certificate {
            lines.push(format!(
                "step-halving certificate: step {:.3e}, deviation {:.3e} (threshold {:.1e})",
                c.step, c.max_deviation, c.threshold
            ));
        }
        for a in m.audit.iter().filter(|a| a.status == AuditStatus::Discrepancy) {
            lines.push(format!(
                "audit {}: discrepancy in {} (max deviation {:.3e})",
                a.equation, a.quantity, a.max_abs_deviation
            ));
        }
        for n in &m.notes {
            lines.push(format!("note: {n}"));
        }
        lines
    }
}

fn physical_times(cfg: &RunConfig) -> Vec<f64> {
    cfg.grid().iter().map(|wt| wt / cfg.params.omega).collect()
}

/// Oracle settings. A step coarser than the output grid makes the oracle
/// emit on its own grid of `ceil(t_max / step)` intervals.
fn integrator_config(cfg: &RunConfig, dim: usize) -> IntegratorConfig {
    let w = cfg.params.omega;
    let spacing = cfg.t_max / cfg.n_steps as f64;
    let intervals = if cfg.step > spacing {
        let n = (cfg.t_max / cfg.step - 1e-9).ceil().max(1.0) as usize;
        log::warn!(
            "oracle step {} exceeds the grid spacing {spacing}; oracle rows use {n} intervals",
            cfg.step
        );
        n
    } else {
        cfg.n_steps
    };
    IntegratorConfig::new(cfg.t_max / w, intervals, dim)
        .with_step(cfg.step / w)
        .with_method(cfg.method)
}

/// Replaces `omega t` by the exact grid values so engines share one axis.
fn align(series: &mut ObservableSeries, grid: &[f64]) {
    if series.rows.len() != grid.len() {
        return;
    }
    for (r, &wt) in series.rows.iter_mut().zip(grid) {
        r.omega_t = wt;
    }
}

fn max_block_deviation(model: &AnalyticModel, blocks: &[DensityBlock]) -> Result<f64> {
    blocks
        .par_iter()
        .map(|b| Ok(model.block(b.time)?.max_deviation(b)))
        .try_reduce(|| 0.0, |a, b| Ok(a.max(b)))
}

fn notes(cfg: &RunConfig, dispersive: &DispersiveReport) -> Vec<String> {
    let mut notes = Vec::new();
    if let Some(n) = cfg.preset.and_then(|p| p.note()) {
        notes.push(n.to_string());
    }
    if let DispersiveReport::Checked(v) = dispersive {
        if v.status == DispersiveStatus::Violated {
            notes.push(format!(
                "dispersive condition violated: |delta|/g = {:.3} < {} sqrt(n + 1) = {:.3}",
                v.ratio,
                v.margin,
                v.margin * v.bound
            ));
        }
    }
    notes
}

fn write_table(path: &Path, format: OutputFormat, rows: &[TableRow]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.to_string()))?;
            if rows.is_empty() {
                w.write_record(COLUMNS).map_err(|e| Error::Io(e.to_string()))?;
            }
            for r in rows {
                w.serialize(r).map_err(|e| Error::Io(e.to_string()))?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let text = serde_json::to_string_pretty(rows).map_err(|e| Error::Io(e.to_string()))?;
            fs::write(path, text + "\n")?;
        }
    }
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Runs one configuration and writes its table and metadata.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let coeffs = derive_coefficients(&cfg.params)?;
    let space = cfg.fock_space()?;
    let grid = cfg.grid();
    let times = physical_times(cfg);
    let dispersive = match check_dispersive_validity(&cfg.params) {
        Ok(v) => DispersiveReport::Checked(v),
        Err(_) => DispersiveReport::Unchecked("unchecked"),
    };

    let model = match cfg.engine {
        Engine::Oracle => None,
        _ => Some(AnalyticModel::new(cfg.params.clone(), space)?),
    };
    let analytic = match &model {
        Some(m) => {
            let mut s = analytic_series(m, &times)?;
            align(&mut s, &grid);
            Some(s)
        }
        None => None,
    };

    let mut certificate = None;
    let mut deviation = None;
    let oracle = match cfg.engine {
        Engine::Oracle | Engine::Both => {
            let initial = DensityBlock::product_initial(&coherent_vector(cfg.params.alpha, space)?);
            let OracleRun {
                blocks,
                certificate: cert,
            } = integrate(&initial, &cfg.params, &coeffs, &integrator_config(cfg, space.dim()))?;
            certificate = Some(cert);
            if let Some(m) = &model {
                deviation = Some(max_block_deviation(m, &blocks)?);
            }
            let mut s = evaluate_blocks(&blocks, &cfg.params, &coeffs, Source::Oracle)?;
            align(&mut s, &grid);
            Some(s)
        }
        _ => None,
    };

    let closed = (cfg.engine == Engine::ClosedForm).then(|| ObservableSeries {
        source: Source::ClosedForm,
        rows: times
            .iter()
            .zip(&grid)
            .map(|(&t, &wt)| ObservableRow {
                omega_t: wt,
                ..closed_form_row(&cfg.params, &coeffs, t)
            })
            .collect(),
    });

    let generic = analytic.as_ref().or(oracle.as_ref());
    let audit_records = generic
        .map(|g| audit(&cfg.params, &coeffs, &g.rows))
        .unwrap_or_default();

    let mut series = Vec::new();
    match cfg.engine {
        Engine::ClosedForm => series.extend(closed),
        _ => {
            series.extend(analytic);
            series.extend(oracle);
        }
    }

    let rows: Vec<TableRow> = series
        .iter()
        .flat_map(|s| s.rows.iter().map(|r| TableRow::from_row(r, &cfg.observables)))
        .collect();
    let table_path = cfg.out.clone();
    let meta_path = cfg.meta_path();
    write_table(&table_path, cfg.format, &rows)?;

    let metadata = RunMetadata {
        config: cfg.clone(),
        coefficients: coeffs,
        fock_dim: space.dim(),
        notes: notes(cfg, &dispersive),
        dispersive_validity: dispersive,
        certificate,
        oracle_analytic_max_deviation: deviation,
        audit: audit_records,
        summary: series.iter().map(SeriesSummary::of).collect(),
    };
    write_json(&meta_path, &metadata)?;
    Ok(RunOutcome {
        table_path,
        meta_path,
        metadata,
        series,
    })
}

/// Swept parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepAxis {
    NTotal,
    NExcited,
    KField,
    KMol,
    /// Real part of the coherent amplitude.
    Alpha,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::NTotal => "n-total",
            SweepAxis::NExcited => "n-excited",
            SweepAxis::KField => "k",
            SweepAxis::KMol => "kprime",
            SweepAxis::Alpha => "alpha",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "n-total" | "n" => Ok(SweepAxis::NTotal),
            "n-excited" => Ok(SweepAxis::NExcited),
            "k" | "k-field" => Ok(SweepAxis::KField),
            "kprime" | "k-mol" => Ok(SweepAxis::KMol),
            "alpha" | "alpha-re" => Ok(SweepAxis::Alpha),
            _ => Err(Error::InvalidConfig(format!("unknown sweep axis '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PointStatus {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub value: f64,
    pub status: PointStatus,
    pub table: Option<PathBuf>,
    pub meta: Option<PathBuf>,
    pub error: Option<String>,
    pub exit_code: Option<i32>,
    pub min_fy: Option<f64>,
    pub summary: Vec<SeriesSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepIndex {
    pub axis: SweepAxis,
    pub half_filled: bool,
    pub values: Vec<f64>,
    pub points: Vec<SweepPoint>,
}

impl SweepIndex {
    /// Exit code of the first failed point, or 0.
    pub fn exit_code(&self) -> i32 {
        self.points.iter().find_map(|p| p.exit_code).unwrap_or(0)
    }

    pub fn summary_lines(&self) -> Vec<String> {
        self.points
            .iter()
            .map(|p| match p.status {
                PointStatus::Ok => format!(
                    "{} = {}: ok, min F_y = {}",
                    self.axis,
                    p.value,
                    p.min_fy.map_or("n/a".into(), |v| format!("{v:.6e}"))
                ),
                PointStatus::Error => format!(
                    "{} = {}: error: {}",
                    self.axis,
                    p.value,
                    p.error.as_deref().unwrap_or("")
                ),
            })
            .collect()
    }
}

fn as_count(axis: SweepAxis, v: f64) -> Result<u32> {
    if v.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&v) {
        return Err(Error::InvalidConfig(format!("{axis} requires a non-negative integer, got {v}")));
    }
    Ok(v as u32)
}

/// Configuration of one sweep point.
pub fn sweep_point(
    base: &RunConfig,
    axis: SweepAxis,
    value: f64,
    half_filled: bool,
    dir: &Path,
) -> Result<RunConfig> {
    let mut cfg = base.clone();
    let p = &mut cfg.params;
    match axis {
        SweepAxis::NTotal => p.n_total = as_count(axis, value)?,
        SweepAxis::NExcited => p.n_excited = as_count(axis, value)?,
        SweepAxis::KField => p.k_field = value,
        SweepAxis::KMol => p.k_mol = value,
        SweepAxis::Alpha => p.alpha.re = value,
    }
    if half_filled {
        p.n_excited = p.n_total / 2;
    }
    let ext = cfg.format.extension();
    cfg.out = dir.join(format!("{axis}_{value}.{ext}"));
    cfg.validate()?;
    Ok(cfg)
}

/// Runs every value independently and writes `index.json` into `dir`.
/// Failures are recorded per point and do not stop the others.
pub fn sweep(
    base: &RunConfig,
    axis: SweepAxis,
    values: &[f64],
    half_filled: bool,
    dir: &Path,
) -> Result<SweepIndex> {
    if values.is_empty() {
        return Err(Error::EmptySweep);
    }
    fs::create_dir_all(dir)?;
    let points = values
        .par_iter()
        .map(|&value| {
            let outcome = sweep_point(base, axis, value, half_filled, dir).and_then(|c| run(&c));
            match outcome {
                Ok(o) => SweepPoint {
                    value,
                    status: PointStatus::Ok,
                    table: Some(o.table_path.clone()),
                    meta: Some(o.meta_path.clone()),
                    error: None,
                    exit_code: None,
                    min_fy: o.min_fy(),
                    summary: o.metadata.summary,
                },
                Err(e) => SweepPoint {
                    value,
                    status: PointStatus::Error,
                    table: None,
                    meta: None,
                    error: Some(e.to_string()),
                    exit_code: Some(e.exit_code()),
                    min_fy: None,
                    summary: Vec::new(),
                },
            }
        })
        .collect();
    let index = SweepIndex {
        axis,
        half_filled,
        values: values.to_vec(),
        points,
    };
    write_json(&dir.join("index.json"), &index)?;
    Ok(index)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub comparison: Comparison,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            comparison: Comparison::AtMost,
            limit,
            passed: value <= limit,
        }
    }

    fn at_least(name: impl Into<String>, value: f64, limit: f64) -> Self {
        Self {
            name: name.into(),
            value,
            comparison: Comparison::AtLeast,
            limit,
            passed: value >= limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub config: RunConfig,
    pub fock_dim: usize,
    pub checks: Vec<Check>,
    pub certificate: Option<ConvergenceCertificate>,
    /// Numerical failure that stopped validation early.
    pub failure: Option<String>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            3
        }
    }

    pub fn summary_lines(&self) -> Vec<String> {
        let mut lines: Vec<String> = self
            .checks
            .iter()
            .map(|c| {
                let op = match c.comparison {
                    Comparison::AtMost => "<=",
                    Comparison::AtLeast => ">=",
                };
                format!(
                    "{} {}: {:.3e} {op} {:.1e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.limit
                )
            })
            .collect();
        if let Some(f) = &self.failure {
            lines.push(format!("FAIL {f}"));
        }
        lines.push(if self.passed { "PASS".into() } else { "FAIL".into() });
        lines
    }

    pub fn path(cfg: &RunConfig) -> PathBuf {
        let stem = cfg
            .out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "run".into());
        cfg.out.with_file_name(format!("{stem}.validation.json"))
    }
}

fn is_validation_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::TruncationLeak { .. }
            | Error::TruncationTooSmall { .. }
            | Error::StepTooLarge { .. }
            | Error::InvariantViolated(_)
    )
}

fn state_checks(label: &str, blocks: &[DensityBlock], trace_limit: f64) -> Vec<Check> {
    let diags: Vec<StateDiagnostics> = blocks.par_iter().map(StateDiagnostics::of).collect();
    let fold = |f: fn(&StateDiagnostics) -> f64, init: f64, pick: fn(f64, f64) -> f64| {
        diags.iter().map(f).fold(init, pick)
    };
    vec![
        Check::at_most(
            format!("trace_error_{label}"),
            fold(|d| d.trace_error, 0.0, f64::max),
            trace_limit,
        ),
        Check::at_most(
            format!("hermiticity_{label}"),
            fold(|d| d.hermiticity, 0.0, f64::max),
            HERMITICITY_THRESHOLD,
        ),
        Check::at_least(
            format!("min_eigenvalue_{label}"),
            fold(|d| d.min_eigenvalue, f64::INFINITY, f64::min),
            POSITIVITY_THRESHOLD,
        ),
    ]
}

fn observable_checks(a: &ObservableSeries, o: &ObservableSeries) -> Vec<Check> {
    let fields: [(&str, fn(&ObservableRow) -> f64); 7] = [
        ("s_total", |r| r.s_total),
        ("s_field", |r| r.s_field),
        ("s_mol", |r| r.s_mol),
        ("s1", |r| r.s1),
        ("Fy_eq30", |r| r.fy_eq30),
        ("Fy_eq31", |r| r.fy_eq31),
        ("n_photon", |r| r.n_photon),
    ];
    fields
        .iter()
        .map(|(name, f)| {
            let dev = a
                .rows
                .iter()
                .zip(&o.rows)
                .map(|(x, y)| (f(x) - f(y)).abs())
                .fold(0.0, f64::max);
            Check::at_most(format!("deviation_{name}"), dev, OBSERVABLE_DEVIATION_THRESHOLD)
        })
        .collect()
}

/// Analytic-versus-oracle validation. The engine is always both; the
/// initial state is not tail-checked so that truncation problems surface
/// as integration leaks.
pub fn validate(cfg: &RunConfig) -> Result<ValidationReport> {
    let mut cfg = cfg.clone();
    cfg.engine = Engine::Both;
    cfg.validate()?;
    let coeffs = derive_coefficients(&cfg.params)?;
    let space = cfg.fock_space()?;
    let mut report = ValidationReport {
        config: cfg.clone(),
        fock_dim: space.dim(),
        checks: Vec::new(),
        certificate: None,
        failure: None,
        passed: false,
    };
    let (psi, _) = truncated_coherent_vector(cfg.params.alpha, space);
    let initial = DensityBlock::product_initial(&psi);
    let stage = integrate(&initial, &cfg.params, &coeffs, &integrator_config(&cfg, space.dim()))
        .and_then(|run| {
            let model = AnalyticModel::new(cfg.params.clone(), space)?;
            Ok((run, model))
        });
    let (run, model) = match stage {
        Ok(x) => x,
        Err(e) if is_validation_failure(&e) => {
            report.failure = Some(e.to_string());
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let analytic_blocks = run
        .blocks
        .par_iter()
        .map(|b| model.block(b.time))
        .collect::<Result<Vec<_>>>()?;
    let block_dev = run
        .blocks
        .iter()
        .zip(&analytic_blocks)
        .map(|(o, a)| o.max_deviation(a))
        .fold(0.0, f64::max);
    report.checks.push(Check::at_most("block_deviation", block_dev, BLOCK_DEVIATION_THRESHOLD));
    let a_series = evaluate_blocks(&analytic_blocks, &cfg.params, &coeffs, Source::Analytic)?;
    let o_series = evaluate_blocks(&run.blocks, &cfg.params, &coeffs, Source::Oracle)?;
    report.checks.extend(observable_checks(&a_series, &o_series));
    report
        .checks
        .extend(state_checks("analytic", &analytic_blocks, ANALYTIC_TRACE_THRESHOLD));
    report
        .checks
        .extend(state_checks("oracle", &run.blocks, ORACLE_TRACE_THRESHOLD));
    report.checks.push(Check::at_most(
        "step_halving",
        run.certificate.max_deviation,
        run.certificate.threshold,
    ));
    report.certificate = Some(run.certificate);
    report.passed = report.checks.iter().all(|c| c.passed);
    Ok(report)
}

/// Writes a validation report as JSON.
pub fn write_report(report: &ValidationReport, path: &Path) -> Result<()> {
    write_json(path, report)
}
