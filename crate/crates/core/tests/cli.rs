use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_chemoflux"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, name: &str, edit: impl FnOnce(&mut serde_json::Value)) -> PathBuf {
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(configs().join(name)).unwrap()).unwrap();
    v["output"]["dir"] = dir.join("out").display().to_string().into();
    edit(&mut v);
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    path
}

#[test]
fn ledger_point_reports_exact_boundary_value() {
    let o = bin().args(["ledger", "--alpha", "1/3", "--p", "3/2"]).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("case-i-low ") && l.contains("(6-6a)/(2+3a)"))
        .map(str::to_owned)
        .expect("row present");
    assert!(line.contains(" 4/3 ") && line.contains("[4/3, 2)") && line.trim_end().ends_with("pass"), "{line}");
}

#[test]
fn ledger_point_outside_every_region_is_not_a_failure() {
    let o = bin().args(["ledger", "--alpha", "5", "--p", "100"]).output().unwrap();
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("n/a"));
}

#[test]
fn ledger_flag_errors_exit_nonzero_with_usage() {
    for args in [
        vec!["ledger", "--alpha", "1/3"],
        vec!["ledger", "--alpha", "1/3", "--p", "3/2", "--scan", "4"],
        vec!["ledger", "--bogus"],
        vec!["frobnicate"],
    ] {
        let o = bin().args(&args).output().unwrap();
        assert!(!o.status.success(), "{args:?}");
        assert!(stderr(&o).contains("Usage"), "{args:?}: {}", stderr(&o));
    }
    let o = bin().args(["ledger", "--alpha", "1e-3", "--p", "2"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("rational"));
}

#[test]
fn ledger_catalog_and_small_scan_pass() {
    let o = bin().arg("ledger").output().unwrap();
    assert!(o.status.success());
    assert!(stdout(&o).lines().count() > 20);
    let o = bin().args(["ledger", "--scan", "6"]).output().unwrap();
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("overall: PASS"));
}

#[test]
fn classify_special_case() {
    let o = bin().arg("classify").arg(configs().join("bounded_stokes.json")).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("weak {iii}, bounded {iii}"), "{}", stdout(&o));
}

#[test]
fn run_with_zero_final_time_writes_one_row() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "quickstart_t0.json", |_| {});
    let o = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("out/diagnostics.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2, "{csv}");
    assert!(csv.lines().nth(1).unwrap().starts_with("0.0000000000000000e0,"));
    let header: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("out/run.json")).unwrap()).unwrap();
    assert_eq!(header["passed"], true);
    assert!(tmp.path().join("out/snapshots/n_0000.bin").exists());
}

#[test]
fn run_flags_parameters_outside_every_clause() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "quickstart_t0.json", |v| {
        v["params"]["alpha"] = 0.1.into();
        v["model"]["kappa_power"] = 2.0.into();
    });
    let o = bin().arg("run").arg(&cfg).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
    let header: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("out/run.json")).unwrap()).unwrap();
    assert!(header["summary"]["warning"].is_string());
}

#[test]
fn invalid_config_lists_every_problem() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "quickstart_t0.json", |v| {
        v["params"]["alpha"] = 0.0.into();
        v["params"]["tau"] = 2.into();
        v["model"]["chi_offset"] = (-1.0).into();
    });
    let o = bin().arg("run").arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    for key in ["params.alpha", "alpha > 0", "params.tau", "model.chi_offset"] {
        assert!(err.contains(key), "{key} missing: {err}");
    }
}

#[test]
fn uniform_oracle_passes() {
    let o = bin().args(["oracle", "uniform"]).arg(configs().join("oracle_uniform.json")).output().unwrap();
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("observed order"));
    let o = bin().args(["oracle", "nonesuch"]).arg(configs().join("oracle_uniform.json")).output().unwrap();
    assert!(!o.status.success());
}

#[test]
fn failed_study_exits_nonzero() {
    // A single dt gives no observed order, which cannot pass.
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("u.json");
    std::fs::write(
        &path,
        r#"{"alpha": 0.5, "model": {"chi_offset": 1, "chi_slope": 0, "kappa_coeff": 1, "kappa_power": 1},
            "t_final": 0.1, "dts": [0.01]}"#,
    )
    .unwrap();
    let o = bin().args(["oracle", "uniform"]).arg(&path).output().unwrap();
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
}

#[test]
fn thread_cap_flag_and_env() {
    let o = bin().args(["--threads", "2", "ledger", "--alpha", "1/4", "--p", "3/2"]).output().unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let o = bin().args(["ledger"]).env("CHEMOFLUX_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("CHEMOFLUX_THREADS"));
    let o = bin().args(["ledger"]).env("CHEMOFLUX_THREADS", "1").output().unwrap();
    assert!(o.status.success());
}
