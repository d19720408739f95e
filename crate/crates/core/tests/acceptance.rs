//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use exciton_cavity::algebra::coherent_vector;
use exciton_cavity::block::StateDiagnostics;
use exciton_cavity::closed_form::{audit, AuditRecord, AuditStatus};
use exciton_cavity::observables::{
    analytic_dipole_series, analytic_series, evaluate_block, linear_entropy, mean_photon_number,
    ObservableRow, Source,
};
use exciton_cavity::oracle::{integrate, propagate};
use exciton_cavity::{
    derive_coefficients, AnalyticModel, DensityBlock, FockSpace, IntegratorConfig, Preset,
    RunConfig, SystemParams,
};
use rayon::prelude::*;

const ORACLE_DIM: usize = 25;
const ORACLE_STEP: f64 = 1e-3;
const EQUIVALENCE_TOL: f64 = 1e-6;
const ANALYTIC_TRACE_TOL: f64 = 1e-10;
const ORACLE_TRACE_TOL: f64 = 1e-8;
const HERMITICITY_TOL: f64 = 1e-8;
const POSITIVITY_TOL: f64 = -1e-9;
const INITIAL_PURITY_TOL: f64 = 1e-10;
const REVIVAL_TOL: f64 = 1e-6;
const MIDPOINT_FLOOR: f64 = 1e-3;
const ASYMPTOTIC_ENTROPY: f64 = 0.01;
const SQUEEZING_FLOOR: f64 = -1e-6;
const NO_DIPOLE_SQUEEZING_FLOOR: f64 = -1e-9;
const FY_INITIAL_TOL: f64 = 1e-10;
const PHOTON_LAW_TOL: f64 = 1e-8;
const HALVING_FACTOR: f64 = 12.0;
const TRUNCATION_TOL: f64 = 1e-8;
/// Oracle steps per preset in the state-sanity scan.
const SANITY_STEP_BUDGET: f64 = 4000.0;
/// Exact spectra of the analytic scan are computed at every n-th point.
const EIGEN_STRIDE: usize = 20;
/// Dense grid for the dipole minima.
const DIPOLE_SPACING: f64 = 1e-4;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn model(p: &SystemParams, dim: Option<usize>) -> AnalyticModel {
    let space = match dim {
        Some(d) => FockSpace::new(d).unwrap(),
        None => FockSpace::for_amplitude(p.alpha),
    };
    AnalyticModel::new(p.clone(), space).unwrap()
}

fn initial(p: &SystemParams, dim: usize) -> DensityBlock {
    DensityBlock::product_initial(&coherent_vector(p.alpha, FockSpace::new(dim).unwrap()).unwrap())
}

fn grid(t_max: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| t_max * i as f64 / n as f64).collect()
}

fn criterion_1() -> Outcome {
    let mut worst = 0.0f64;
    let mut parts = Vec::new();
    for preset in [Preset::Fig1a, Preset::Fig1b, Preset::Fig1c] {
        let started = Instant::now();
        let p = preset.params();
        let co = derive_coefficients(&p).unwrap();
        let m = model(&p, Some(ORACLE_DIM));
        let cfg = IntegratorConfig::new(3.0, 3000, ORACLE_DIM).with_step(ORACLE_STEP);
        let dev = match integrate(&initial(&p, ORACLE_DIM), &p, &co, &cfg) {
            Ok(run) => run
                .blocks
                .par_iter()
                .map(|b| m.block(b.time).unwrap().max_deviation(b))
                .reduce(|| 0.0, f64::max),
            Err(e) => {
                return outcome(false, format!("{preset}: oracle failed: {e}"));
            }
        };
        worst = worst.max(dev);
        parts.push(format!("{preset} {dev:.2e} ({:.1}s)", started.elapsed().as_secs_f64()));
    }
    outcome(
        worst <= EQUIVALENCE_TOL,
        format!("max block deviation {} <= {EQUIVALENCE_TOL:.0e}", parts.join(", ")),
    )
}

struct ScanPoint {
    trace_err: f64,
    herm: f64,
    positive: bool,
    eig: Option<f64>,
    photon_err: f64,
}

/// Per-preset scan of the closed-form state on the preset grid. Positivity
/// is decided at every point by Cholesky; the spectrum itself is sampled.
struct AnalyticScan {
    preset: Preset,
    points: usize,
    max_trace_err: f64,
    max_herm: f64,
    all_positive: bool,
    sampled_min_eig: f64,
    s_total_0: f64,
    max_photon_err: f64,
}

fn analytic_scans() -> &'static [AnalyticScan] {
    static SCANS: OnceLock<Vec<AnalyticScan>> = OnceLock::new();
    SCANS.get_or_init(|| {
        Preset::ALL
            .iter()
            .map(|&preset| {
                let p = preset.params();
                let m = model(&p, None);
                let n0 = p.mean_photons();
                let rows: Vec<ScanPoint> = grid(preset.t_max(), preset.steps())
                    .par_iter()
                    .enumerate()
                    .map(|(i, &wt)| {
                        let t = wt / p.omega;
                        let b = m.block(t).unwrap();
                        let n = mean_photon_number(&b.reduced_field()).unwrap();
                        let law = n0 * (-2.0 * p.k_field * t).exp();
                        ScanPoint {
                            trace_err: b.trace_error(),
                            herm: b.hermiticity_residue(),
                            positive: b.eigenvalues_above(POSITIVITY_TOL),
                            eig: (i % EIGEN_STRIDE == 0).then(|| b.min_eigenvalue()),
                            photon_err: (n - law).abs(),
                        }
                    })
                    .collect();
                let b0 = m.block(0.0).unwrap();
                AnalyticScan {
                    preset,
                    points: rows.len(),
                    max_trace_err: rows.iter().map(|r| r.trace_err).fold(0.0, f64::max),
                    max_herm: rows.iter().map(|r| r.herm).fold(0.0, f64::max),
                    all_positive: rows.iter().all(|r| r.positive),
                    sampled_min_eig: rows.iter().filter_map(|r| r.eig).fold(f64::INFINITY, f64::min),
                    s_total_0: 1.0 - b0.purity(),
                    max_photon_err: rows.iter().map(|r| r.photon_err).fold(0.0, f64::max),
                }
            })
            .collect()
    })
}

struct OracleScan {
    preset: Preset,
    window: f64,
    diag: Result<(f64, f64, f64), String>,
}

/// Oracle window per preset: the default grid where the step budget allows,
/// otherwise the leading `SANITY_STEP_BUDGET` steps of size `0.1/(A omega)`.
fn oracle_scan(preset: Preset) -> OracleScan {
    let p = preset.params();
    let co = derive_coefficients(&p).unwrap();
    let dim = FockSpace::for_amplitude(p.alpha).dim();
    let step = ORACLE_STEP.min(0.1 / (co.a_f64() * p.omega));
    let window = preset.t_max().min(SANITY_STEP_BUDGET * step);
    let intervals = ((window / ORACLE_STEP).round() as usize).clamp(1, 3000);
    let cfg = IntegratorConfig::new(window / p.omega, intervals, dim).with_step(step / p.omega);
    let diag = integrate(&initial(&p, dim), &p, &co, &cfg)
        .map(|run| {
            let d: Vec<StateDiagnostics> = run.blocks.par_iter().map(StateDiagnostics::of).collect();
            (
                d.iter().map(|x| x.trace_error).fold(0.0, f64::max),
                d.iter().map(|x| x.hermiticity).fold(0.0, f64::max),
                d.iter().map(|x| x.min_eigenvalue).fold(f64::INFINITY, f64::min),
            )
        })
        .map_err(|e| e.to_string());
    OracleScan {
        preset,
        window,
        diag,
    }
}

fn criterion_2() -> Outcome {
    let mut failures = Vec::new();
    let (mut tr, mut herm, mut eig) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut points = 0;
    let started = Instant::now();
    let scans = analytic_scans();
    let analytic_secs = started.elapsed().as_secs_f64();
    for s in scans {
        tr = tr.max(s.max_trace_err);
        herm = herm.max(s.max_herm);
        eig = eig.min(s.sampled_min_eig);
        points += s.points;
        if s.max_trace_err > ANALYTIC_TRACE_TOL
            || s.max_herm > HERMITICITY_TOL
            || !s.all_positive
            || s.sampled_min_eig < POSITIVITY_TOL
        {
            failures.push(format!("{} analytic", s.preset));
        }
    }
    let (mut otr, mut oherm, mut oeig) = (0.0f64, 0.0f64, f64::INFINITY);
    let mut shortest = f64::INFINITY;
    let started = Instant::now();
    for preset in Preset::ALL {
        let s = oracle_scan(preset);
        shortest = shortest.min(s.window);
        match s.diag {
            Ok((t, h, e)) => {
                otr = otr.max(t);
                oherm = oherm.max(h);
                oeig = oeig.min(e);
                if t > ORACLE_TRACE_TOL || h > HERMITICITY_TOL || e < POSITIVITY_TOL {
                    failures.push(format!("{} oracle", s.preset));
                }
            }
            Err(e) => failures.push(format!("{} oracle: {e}", s.preset)),
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "analytic ({points} points, all rho + 1e-9 positive definite, {analytic_secs:.0}s): \
             trace {tr:.1e}, herm {herm:.1e}, sampled min eig {eig:.1e}; \
             oracle (windows >= {shortest:.3}, {:.0}s): trace {otr:.1e}, herm {oherm:.1e}, min eig {oeig:.1e}{}",
            started.elapsed().as_secs_f64(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failing: {}", failures.join(", "))
            }
        ),
    )
}

fn criterion_3() -> Outcome {
    let worst = analytic_scans()
        .iter()
        .map(|s| s.s_total_0.abs())
        .fold(0.0, f64::max);
    outcome(
        worst <= INITIAL_PURITY_TOL,
        format!("max |s_total(0)| over 18 presets {worst:.1e} <= {INITIAL_PURITY_TOL:.0e}"),
    )
}

fn criterion_4() -> Outcome {
    let p = SystemParams::new(10, 5).with_damping(0.05, 0.0);
    let m = model(&p, None);
    let s_field = |wt: f64| linear_entropy(&m.block(wt / p.omega).unwrap().reduced_field()).unwrap();
    let revival = (1..=9).map(|j| s_field(PI * j as f64 / 30.0)).fold(0.0, f64::max);
    let midpoint = (0..9)
        .map(|j| s_field(PI * (j as f64 + 0.5) / 30.0))
        .fold(f64::INFINITY, f64::min);
    outcome(
        revival <= REVIVAL_TOL && midpoint > MIDPOINT_FLOOR,
        format!("max s_field at revivals {revival:.1e}, min at midpoints {midpoint:.3}"),
    )
}

fn criterion_5() -> Outcome {
    let p = Preset::Fig1a.params();
    let m = model(&p, None);
    let co = derive_coefficients(&p).unwrap();
    let r = evaluate_block(&m.block(200.0 / p.omega).unwrap(), &p, &co, Source::Analytic).unwrap();
    let n_bound = 1e-8 * p.mean_photons() + 1e-6;
    outcome(
        r.s_total <= ASYMPTOTIC_ENTROPY
            && r.s_field <= ASYMPTOTIC_ENTROPY
            && r.s_mol <= ASYMPTOTIC_ENTROPY
            && r.n_photon <= n_bound,
        format!(
            "omega t = 200: s_total {:.1e}, s_field {:.1e}, s_mol {:.1e}, <n> {:.1e}",
            r.s_total, r.s_field, r.s_mol, r.n_photon
        ),
    )
}

fn criterion_6() -> Outcome {
    let mut parts = Vec::new();
    let mut worst = f64::INFINITY;
    for preset in [Preset::Fig2a, Preset::Fig2b, Preset::Fig2c] {
        let p = preset.params();
        let times: Vec<f64> = grid(3.0, preset.steps()).iter().map(|wt| wt / p.omega).collect();
        let s = analytic_series(&model(&p, None), &times).unwrap();
        let min = s.min_by(|r| r.s1);
        worst = worst.min(min);
        parts.push(format!("{preset} {min:.1e}"));
    }
    outcome(
        worst >= SQUEEZING_FLOOR,
        format!("min s1 {} >= {SQUEEZING_FLOOR:.0e}", parts.join(", ")),
    )
}

fn min_dipole(preset: Preset) -> f64 {
    let p = preset.params();
    let n = (preset.t_max() / DIPOLE_SPACING).round() as usize;
    let times: Vec<f64> = grid(preset.t_max(), n).iter().map(|wt| wt / p.omega).collect();
    analytic_dipole_series(&model(&p, None), &times)
        .unwrap()
        .iter()
        .map(|d| d.fy_with_sigma_z)
        .fold(f64::INFINITY, f64::min)
}

fn criterion_7() -> Outcome {
    let a = min_dipole(Preset::Fig5a);
    let b: Vec<f64> = [Preset::Fig4a, Preset::Fig4b, Preset::Fig4c]
        .into_iter()
        .map(min_dipole)
        .collect();
    let b_ok = b[0] < 0.0 && b[1] < b[0] && b[2] < b[1];
    let c = Preset::ALL
        .iter()
        .map(|pr| {
            let p = pr.params();
            let co = derive_coefficients(&p).unwrap();
            let r = evaluate_block(&model(&p, None).block(0.0).unwrap(), &p, &co, Source::Analytic).unwrap();
            (r.fy_eq30 - 1.0).abs().max((r.fy_eq31 - 1.0).abs())
        })
        .fold(0.0, f64::max);
    outcome(
        a >= NO_DIPOLE_SQUEEZING_FLOOR && b_ok && c <= FY_INITIAL_TOL,
        format!(
            "(a) fig5a min F_y {a:.2e}; (b) fig4a/b/c min F_y {:.3}, {:.3}, {:.3}; (c) max |F_y(0) - 1| {c:.1e}",
            b[0], b[1], b[2]
        ),
    )
}

fn criterion_8() -> Outcome {
    let worst = analytic_scans()
        .iter()
        .map(|s| s.max_photon_err)
        .fold(0.0, f64::max);
    outcome(
        worst <= PHOTON_LAW_TOL,
        format!("max |<n> - |alpha|^2 e^(-2kt)| over 18 preset grids {worst:.1e}"),
    )
}

fn criterion_9() -> Outcome {
    let p = Preset::Fig1a.params();
    let co = derive_coefficients(&p).unwrap();
    let m = model(&p, Some(ORACLE_DIM));
    let init = initial(&p, ORACLE_DIM);
    let deviation = |step: f64| {
        let cfg = IntegratorConfig::new(3.0, 3000, ORACLE_DIM).with_step(step);
        propagate(&init, &p, &co, &cfg)
            .unwrap()
            .par_iter()
            .map(|b| m.block(b.time).unwrap().max_deviation(b))
            .reduce(|| 0.0, f64::max)
    };
    let coarse = deviation(ORACLE_STEP);
    let fine = deviation(ORACLE_STEP / 2.0);
    let ratio = coarse / fine;

    let times = grid(3.0, Preset::Fig1a.steps());
    let s25 = analytic_series(&model(&p, Some(25)), &times).unwrap();
    let s35 = analytic_series(&model(&p, Some(35)), &times).unwrap();
    let fields: [fn(&ObservableRow) -> f64; 9] = [
        |r| r.s_total,
        |r| r.s_field,
        |r| r.s_mol,
        |r| r.s1,
        |r| r.fy_eq30,
        |r| r.fy_eq31,
        |r| r.n_photon,
        |r| r.trace_err,
        |r| r.purity_total,
    ];
    let change = s25
        .rows
        .iter()
        .zip(&s35.rows)
        .flat_map(|(a, b)| fields.iter().map(move |f| (f(a) - f(b)).abs()))
        .fold(0.0, f64::max);
    outcome(
        ratio >= HALVING_FACTOR && change <= TRUNCATION_TOL,
        format!(
            "deviation {coarse:.2e} -> {fine:.2e} (factor {ratio:.1}); fock 25 -> 35 max change {change:.1e}"
        ),
    )
}

fn criterion_10() -> Outcome {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/closed_form_audit_fig1a.json");
    let committed: Vec<AuditRecord> = match std::fs::read_to_string(&path)
        .ok()
        .and_then(|s| serde_json::from_str::<serde_json::Value>(&s).ok())
        .and_then(|v| serde_json::from_value(v["records"].clone()).ok())
    {
        Some(r) => r,
        None => return outcome(false, format!("missing or unreadable {}", path.display())),
    };
    let cfg = RunConfig::from_preset(Preset::Fig1a);
    let p = &cfg.params;
    let co = derive_coefficients(p).unwrap();
    let times: Vec<f64> = cfg.grid().iter().map(|wt| wt / p.omega).collect();
    let rows = analytic_series(&model(p, None), &times).unwrap().rows;
    let fresh = audit(p, &co, &rows);

    let mut silent = Vec::new();
    let mut labels = Vec::new();
    for tag in ["eq22", "eq23", "eq24", "eq28", "eq31"] {
        for rec in fresh.iter().filter(|r| r.equation.split('+').next() == Some(tag)) {
            let on_file = committed
                .iter()
                .find(|c| c.equation == rec.equation && c.quantity == rec.quantity);
            let accounted = match rec.status {
                AuditStatus::Match => true,
                AuditStatus::Discrepancy => on_file.is_some_and(|c| {
                    c.status == AuditStatus::Discrepancy && c.first_divergent_omega_t.is_some()
                }),
            };
            if !accounted {
                silent.push(rec.equation.clone());
            }
            labels.push(format!(
                "{} {}",
                rec.equation,
                match rec.status {
                    AuditStatus::Match => "match",
                    AuditStatus::Discrepancy => "recorded",
                }
            ));
        }
    }
    let covered = ["eq22", "eq23", "eq24", "eq28", "eq31"]
        .iter()
        .all(|t| fresh.iter().any(|r| r.equation == *t));
    outcome(
        silent.is_empty() && covered,
        format!(
            "{}; silent divergences: {}",
            labels.join(", "),
            if silent.is_empty() { "none".into() } else { silent.join(", ") }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("oracle equivalence", criterion_1),
        ("state sanity", criterion_2),
        ("initial purity", criterion_3),
        ("pure-state revivals", criterion_4),
        ("asymptotic decay", criterion_5),
        ("no quadrature squeezing", criterion_6),
        ("dipole-squeezing structure", criterion_7),
        ("mean-photon law", criterion_8),
        ("numerical hygiene", criterion_9),
        ("closed-form audit", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let o = check();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {:>2} {name}: {} [{:.1}s]",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail,
            started.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
