use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_exciton-cavity"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn excited_count_above_total_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["run", "--n-total", "10", "--n-excited", "11"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("invalid config: n_excited > N_total"), "{}", stderr(&o));
}

#[test]
fn unknown_flag_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["run", "--preset", "fig1a", "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fig5a_reports_no_dipole_squeezing() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["run", "--preset", "fig5a", "--observables", "Fy_eq30,Fy_eq31"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("min F_y = "))
        .map(str::to_owned)
        .unwrap();
    let value: f64 = line["min F_y = ".len()..].split_whitespace().next().unwrap().parse().unwrap();
    assert!(value >= 0.0, "{line}");
    assert!(line.contains("no dipole squeezing"));
    let meta = fs::read_to_string(dir.path().join("fig5a.meta.json")).unwrap();
    assert!(meta.contains("n = 1"));
}

#[test]
fn both_engines_write_schema_and_deviation() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["run", "--preset", "fig1a", "--engine", "both", "--tmax", "0.5", "--out", "a.csv"];
    let o = run_in(dir.path(), &args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("oracle/analytic max block deviation = "))
        .map(str::to_owned)
        .unwrap();
    let dev: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(dev <= 1e-6);

    let csv = fs::read_to_string(dir.path().join("a.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "omega_t,s_total,s_field,s_mol,s1,Fy_eq30,Fy_eq31,n_photon,trace_err,purity_total,engine"
    );
    assert_eq!(csv.lines().filter(|l| l.ends_with(",analytic")).count(), 501);
    assert_eq!(csv.lines().filter(|l| l.ends_with(",oracle")).count(), 501);

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("a.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["fock_dim"], 21);
    assert_eq!(meta["dispersive_validity"], "unchecked");
    assert_eq!(meta["certificate"]["passed"], true);
    assert_eq!(meta["audit"].as_array().unwrap().len(), 6);
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["x.csv", "y.csv"] {
        let o = run_in(dir.path(), &["run", "--preset", "fig3b", "--tmax", "1", "--out", out]);
        assert_eq!(o.status.code(), Some(0));
    }
    let read = |f: &str| fs::read(dir.path().join(f)).unwrap();
    assert_eq!(read("x.csv"), read("y.csv"));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("cfg.toml"),
        "preset = \"fig1a\"\ntmax = 0.1\nkprime = 0.0\nformat = \"json\"\nout = \"file.json\"\n",
    )
    .unwrap();
    let o = run_in(dir.path(), &["run", "--config", "cfg.toml", "--out", "flag.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(!dir.path().join("file.json").exists());
    let rows: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("flag.json")).unwrap()).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 101);
    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("flag.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["config"]["params"]["k_mol"], 0.0);
    assert!(stderr(&o).contains("overrides preset"));
}

#[test]
fn validate_passes_on_fig1a() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["validate", "--preset", "fig1a", "--out", "v.csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("v.validation.json")).unwrap())
            .unwrap();
    assert_eq!(report["passed"], true);
    let block = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "block_deviation")
        .unwrap();
    assert!(block["value"].as_f64().unwrap() <= 1e-6);
}

#[test]
fn validate_coarse_step_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["validate", "--preset", "fig1a", "--step", "0.1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL step too large"), "{}", stdout(&o));
}

#[test]
fn validate_small_truncation_leaks() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(dir.path(), &["validate", "--preset", "fig1a", "--fock-dim", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("FAIL truncation leak"), "{}", stdout(&o));
}

#[test]
fn sweep_writes_index_and_rejects_empty_lists() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &["sweep", "--preset", "fig1a", "--tmax", "0.2", "--axis", "kprime", "--values", "0,0.05", "--out", "sw"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let index: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sw/index.json")).unwrap()).unwrap();
    assert_eq!(index["points"].as_array().unwrap().len(), 2);
    assert!(dir.path().join("sw/kprime_0.csv").exists());
    assert!(dir.path().join("sw/kprime_0.05.meta.json").exists());

    let o = run_in(dir.path(), &["sweep", "--preset", "fig1a", "--axis", "kprime", "--values", ""]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("empty sweep"));
}

#[test]
fn exciton_number_sweep_deepens_dipole_squeezing() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "sweep", "--preset", "fig4a", "--axis", "n-total", "--values", "20,50,100", "--half-filled",
            "--observables", "Fy_eq30", "--out", "n",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let index: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("n/index.json")).unwrap()).unwrap();
    let mins: Vec<f64> = index["points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["min_fy"].as_f64().unwrap())
        .collect();
    assert!(mins[0] < 0.0 && mins[1] < mins[0] && mins[2] < mins[1], "{mins:?}");
}
