//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use chemoflux::config::Config;
use chemoflux::ledger::{build_ledger, check_entry, rational, scaling_check, scan_region};
use chemoflux::model::{classify_assumption, BoundaryMode, ChiKappaModel, Clause, DomainSpec, SimParams};
use chemoflux::oracle::{barenblatt_study, uniform_study, BarenblattStudyConfig, UniformStudyConfig};
use chemoflux::run::{simulate, RunSummary};

const MASS_DRIFT_TOL: f64 = 1e-12;
const MAX_C_TOL: f64 = 1e-10;
const ENERGY_CEILING: f64 = 100.0;
const BOUNDED_MULTIPLE: f64 = 2.0;
const DIV_TOL_PERIODIC: f64 = 1e-10;
const DIV_TOL_NEUMANN: f64 = 1e-8;
const LEDGER_DENSITY: usize = 100;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn load(name: &str) -> Config {
    Config::from_path(&configs().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn read_json<T: serde::de::DeserializeOwned>(name: &str) -> T {
    serde_json::from_str(&std::fs::read_to_string(configs().join(name)).unwrap()).unwrap()
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn sci(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", items.join(", "))
}

fn timed(limit: Duration, f: impl FnOnce() -> Verdict) -> Verdict {
    let start = Instant::now();
    let v = f();
    let took = start.elapsed();
    let in_time = took <= limit;
    Verdict {
        pass: v.pass && in_time,
        detail: format!("{}; {:.1}s (limit {}s)", v.detail, took.as_secs_f64(), limit.as_secs()),
    }
}

fn mass_run() -> RunSummary {
    simulate(&load("mass_3d.json")).expect("mass run")
}

fn criterion_1(s: &RunSummary) -> Verdict {
    verdict(
        s.stats.steps == 1000 && s.stats.max_mass_drift <= MASS_DRIFT_TOL,
        format!(
            "{} steps, max relative mass drift {:.3e} (tol {MASS_DRIFT_TOL:e})",
            s.stats.steps, s.stats.max_mass_drift
        ),
    )
}

fn criterion_2(s: &RunSummary) -> Verdict {
    let sample_min_n = s.records.iter().map(|r| r.min_n).fold(f64::INFINITY, f64::min);
    let sample_min_c = s.records.iter().map(|r| r.min_c).fold(f64::INFINITY, f64::min);
    verdict(
        s.stats.min_n >= 0.0
            && s.stats.min_c >= 0.0
            && sample_min_n >= 0.0
            && sample_min_c >= 0.0
            && s.stats.max_c_increase <= MAX_C_TOL,
        format!(
            "min n {:.3e}, min c {:.3e} over every step; largest per-step max c increase {:.3e} (tol {MAX_C_TOL:e})",
            s.stats.min_n, s.stats.min_c, s.stats.max_c_increase
        ),
    )
}

fn criterion_3() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (tag, alpha) in [("0p2", 0.2), ("0p5", 0.5), ("1p2", 1.2)] {
        let cfg = load(&format!("energy_alpha_{tag}.json"));
        assert_eq!(cfg.params.alpha, alpha);
        assert_eq!(cfg.output.energy_ceiling_factor, Some(ENERGY_CEILING));
        let s = simulate(&cfg).expect("energy run");
        let e0 = s.records[0].e_m;
        let ok = s.weak.all_finite && s.weak.sup_e_m <= ENERGY_CEILING * e0.max(1.0) && s.records.last().unwrap().t == 1.0;
        pass &= ok;
        parts.push(format!(
            "alpha {alpha}: sup E_M {:.3} vs ceiling {:.3}, finite {}",
            s.weak.sup_e_m,
            ENERGY_CEILING * e0.max(1.0),
            s.weak.all_finite
        ));
    }
    verdict(pass, parts.join("; "))
}

fn criterion_4() -> Verdict {
    let cfg = load("bounded_stokes.json");
    assert_eq!((cfg.params.tau, cfg.params.alpha), (0, 0.15));
    let s = simulate(&cfg).expect("bounded run");
    let b = s.bounded.as_ref().expect("bounded check configured");
    let limit = BOUNDED_MULTIPLE * s.records[0].max_n;
    verdict(
        b.sup_max_n <= limit,
        format!("sup max n {:.4e} vs 2 max n0 = {:.4e}", b.sup_max_n, limit),
    )
}

fn criterion_5() -> Verdict {
    let cfg: UniformStudyConfig = read_json("oracle_uniform.json");
    let s = uniform_study(&cfg).expect("uniform study");
    verdict(
        s.passed(),
        format!("dt {:?}: c(T) rel errors {}, orders {:.3?}", s.dts, sci(&s.final_rel_errors), s.orders),
    )
}

fn criterion_6() -> Verdict {
    let cfg: BarenblattStudyConfig = read_json("oracle_barenblatt.json");
    assert_eq!((cfg.alpha, cfg.rho), (0.5, 1e-6));
    let s = barenblatt_study(&cfg).expect("barenblatt study");
    verdict(
        s.resolutions == [64, 128, 256] && s.strictly_decreasing(),
        format!("N {:?}: L1 errors {}, orders {:.3?}", s.resolutions, sci(&s.l1_errors), s.orders),
    )
}

fn criterion_7(mass: &RunSummary) -> Verdict {
    let neumann = load("neumann_2d.json");
    assert_eq!(neumann.params.domain.mode, BoundaryMode::Neumann);
    let sn = simulate(&neumann).expect("neumann run");
    let mut periodic = neumann.clone();
    periodic.params.domain = DomainSpec::new(BoundaryMode::Periodic, &[2.0, 2.0], &[64, 64]).unwrap();
    let sp = simulate(&periodic).expect("periodic run");
    let worst_periodic = sp.stats.max_div_residual.max(mass.stats.max_div_residual);
    verdict(
        worst_periodic <= DIV_TOL_PERIODIC && sn.stats.max_div_residual <= DIV_TOL_NEUMANN,
        format!(
            "periodic max |div u| {:.3e} (tol {DIV_TOL_PERIODIC:e}); neumann 64x64 no-slip {:.3e} over {} steps (tol {DIV_TOL_NEUMANN:e})",
            worst_periodic, sn.stats.max_div_residual, sn.stats.steps
        ),
    )
}

fn criterion_8() -> Verdict {
    let ledger = build_ledger();
    let mut failures = Vec::new();
    let mut points = 0;
    for e in &ledger {
        let s = scan_region(e, LEDGER_DENSITY).expect("scan");
        points += s.interior_points;
        if s.interior_points == 0 || !s.all_interior_pass() {
            failures.push(format!("{} lattice", e.id));
        }
        if !scaling_check(e).is_ok() {
            failures.push(format!("{} scaling", e.id));
        }
    }
    let find = |id: &str| ledger.iter().find(|e| e.id == id).unwrap();
    let c = check_entry(find("case-i-low"), &rational(1, 3), &rational(0, 1)).unwrap();
    let boundary = c.bounds.iter().find(|b| b.name == "(6-6a)/(2+3a)").unwrap();
    let boundary_ok = boundary.value == Some(rational(4, 3)) && boundary.pass;
    let t5 = check_entry(find("lp-low-theta5"), &rational(1, 4), &rational(3, 2)).unwrap();
    let theta5 = t5.bounds.iter().find(|b| b.name == "theta5").unwrap();
    let theta5_ok = theta5.value == Some(rational(1, 6));
    verdict(
        failures.is_empty() && boundary_ok && theta5_ok,
        format!(
            "{} entries, {points} interior points, failures {:?}; (6-6a)/(2+3a) at 1/3 exact 4/3: {boundary_ok}; theta5(1/4, 3/2) = 1/6: {theta5_ok}",
            ledger.len(),
            failures
        ),
    )
}

fn criterion_9() -> Verdict {
    use Clause::*;
    let domain = DomainSpec::new(BoundaryMode::Periodic, &[1.0], &[8]).unwrap();
    let cases = [
        ((0.0, 1.0, 1.0), 0.2, vec![I, II, III], vec![I, II, III]),
        ((1.0, 0.0, 1.0), 0.15, vec![III], vec![III]),
        ((1.0, 0.0, 2.0), 0.1, vec![], vec![]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for ((chi_a, chi_b, m), alpha, weak, bounded) in cases {
        let model = ChiKappaModel::new(chi_a, chi_b, 1.0, m).unwrap();
        let params = SimParams::new(alpha, 0, 0.01, 1.0, domain);
        let got = classify_assumption(&model, &params, 1.0).unwrap();
        let ok = got.weak.iter().copied().eq(weak) && got.bounded.iter().copied().eq(bounded);
        pass &= ok;
        parts.push(format!("alpha {alpha}: {got}"));
    }
    // The same case from the shipped config file, as the CLI reads it.
    let cfg = load("bounded_stokes.json");
    let from_file = chemoflux::run::classify(&cfg).unwrap();
    pass &= from_file.weak.iter().copied().eq([III]) && from_file.bounded.iter().copied().eq([III]);
    verdict(pass, parts.join("; "))
}

fn criterion_10() -> Verdict {
    let base: serde_json::Value = read_json("energy_alpha_0p5.json");
    let tmp = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for k in 0..2 {
        let dir = tmp.path().join(format!("run{k}"));
        let mut cfg = base.clone();
        cfg["output"]["dir"] = serde_json::Value::String(dir.join("out").display().to_string());
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("config.json");
        std::fs::write(&path, serde_json::to_string(&cfg).unwrap()).unwrap();
        let status = Command::new(env!("CARGO_BIN_EXE_chemoflux"))
            .args(["run", path.to_str().unwrap()])
            .output()
            .expect("spawn chemoflux");
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
        csvs.push(std::fs::read(dir.join("out/diagnostics.csv")).unwrap());
    }
    verdict(
        csvs[0] == csvs[1] && !csvs[0].is_empty(),
        format!("two invocations, {} bytes each, identical: {}", csvs[0].len(), csvs[0] == csvs[1]),
    )
}

fn main() {
    let mut results = Vec::new();
    let mut report = |n: usize, name: &str, v: Verdict| {
        println!("criterion {n:>2} [{}] {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        results.push(v.pass);
    };
    let start = Instant::now();
    let mass = mass_run();
    let mass_time = start.elapsed();
    report(1, "mass conservation", {
        let v = criterion_1(&mass);
        let ok = mass_time <= Duration::from_secs(120);
        verdict(v.pass && ok, format!("{}; {:.1}s (limit 120s)", v.detail, mass_time.as_secs_f64()))
    });
    report(2, "positivity and max principle", criterion_2(&mass));
    report(3, "energy boundedness", timed(Duration::from_secs(600), criterion_3));
    report(4, "bounded-weak regime", timed(Duration::from_secs(300), criterion_4));
    report(5, "uniform-state oracle", timed(Duration::from_secs(60), criterion_5));
    report(6, "porous-medium source oracle", timed(Duration::from_secs(120), criterion_6));
    report(7, "projection residual", timed(Duration::from_secs(180), || criterion_7(&mass)));
    report(8, "ledger exactness", timed(Duration::from_secs(60), criterion_8));
    report(9, "assumption classification", criterion_9());
    report(10, "determinism", criterion_10());
    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
