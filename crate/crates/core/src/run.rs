//! Run orchestration: mollified initial data, adaptive stepping that lands on
//! every sample time, diagnostics and snapshot output.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::Config;
use crate::diagnostics::{
    bounded_class_check, weak_class_check, write_csv, BoundedClassReport, DiagnosticsRecord,
    WeakClassReport,
};
use crate::error::{Error, Result};
use crate::grid::{divergence, integrate, write_snapshot};
use crate::model::{classify_assumption, AssumptionCase};
use crate::mollify::{mollify, mollify_vector};
use crate::solver::{FieldState, Solver};

/// Per-step invariant tracking, independent of the sampling cadence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepStats {
    pub steps: usize,
    pub max_div_residual: f64,
    pub min_n: f64,
    pub min_c: f64,
    /// Largest `max c(t_{k+1}) - max c(t_k)` over all steps (≤ 0 for a max principle).
    pub max_c_increase: f64,
    pub initial_mass: f64,
    pub max_mass_drift: f64,
}

/// Everything a run produced besides the files.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub assumption_case: AssumptionCase,
    /// Set when no assumption clause holds for the configured parameters.
    pub warning: Option<String>,
    pub stats: StepStats,
    pub weak: WeakClassReport,
    pub bounded: Option<BoundedClassReport>,
    #[serde(skip)]
    pub records: Vec<DiagnosticsRecord>,
    #[serde(skip)]
    pub final_state: FieldState,
}

impl RunSummary {
    /// Weak-class check and the optional bounded-class check both pass.
    pub fn passed(&self) -> bool {
        self.weak.passed() && self.bounded.as_ref().is_none_or(|b| b.within_bound)
    }
}

/// Mollified initial state at `t = 0`.
pub fn initial_state(cfg: &Config) -> Result<FieldState> {
    let (n, c, u) = cfg.initial_fields()?;
    let rho = cfg.params.rho;
    let mut s = FieldState::zeros(cfg.params.domain);
    s.n = mollify(&n, rho)?;
    s.c = mollify(&c, rho)?;
    // Mollification commutes with the discrete divergence only in periodic
    // mode; project again so the stored velocity is solenoidal either way.
    let projected = crate::solver::project(&mollify_vector(&u, rho)?)?;
    s.u = projected.u;
    Ok(s)
}

/// Classify against the assumption lists using the initial oxygen maximum.
pub fn classify(cfg: &Config) -> Result<AssumptionCase> {
    let s = initial_state(cfg)?;
    classify_assumption(&cfg.model, &cfg.params, s.c.max().max(0.0))
}

/// Simulate without touching the filesystem.
pub fn simulate(cfg: &Config) -> Result<RunSummary> {
    simulate_inner(cfg, None)
}

/// Simulate and write `diagnostics.csv`, `run.json` and snapshots to the
/// configured output directory.
pub fn run(cfg: &Config) -> Result<RunSummary> {
    let dir = cfg.output_dir();
    fs::create_dir_all(&dir)?;
    let summary = simulate_inner(cfg, Some(&dir))?;
    let csv = BufWriter::new(fs::File::create(dir.join("diagnostics.csv"))?);
    write_csv(csv, &summary.records)?;
    #[derive(Serialize)]
    struct Header<'a> {
        config: &'a Config,
        summary: &'a RunSummary,
        passed: bool,
    }
    let header = Header {
        config: cfg,
        summary: &summary,
        passed: summary.passed(),
    };
    fs::write(dir.join("run.json"), serde_json::to_string_pretty(&header)?)?;
    Ok(summary)
}

fn snapshot(dir: &Path, fields: &[String], s: &FieldState, index: usize) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for f in fields {
        match f.as_str() {
            "n" => out.push(write_snapshot(dir, &format!("n_{index:04}"), "n", s.t, &s.n)?),
            "c" => out.push(write_snapshot(dir, &format!("c_{index:04}"), "c", s.t, &s.c)?),
            "p" => out.push(write_snapshot(dir, &format!("p_{index:04}"), "p", s.t, &s.p)?),
            "u" => {
                for (a, comp) in s.u.components().iter().enumerate() {
                    let name = format!("u{a}");
                    out.push(write_snapshot(dir, &format!("{name}_{index:04}"), &name, s.t, comp)?);
                }
            }
            other => unreachable!("validated snapshot field {other}"),
        }
    }
    Ok(out)
}

fn simulate_inner(cfg: &Config, out_dir: Option<&Path>) -> Result<RunSummary> {
    let params = cfg.params;
    let solver = Solver::new(params, cfg.model)?;
    let mut state = initial_state(cfg)?;
    let assumption_case = classify_assumption(&cfg.model, &params, state.c.max().max(0.0))?;
    let warning = (!assumption_case.any_weak() && !assumption_case.any_bounded()).then(|| {
        format!(
            "no assumption clause holds for alpha = {} with this chi/kappa; results are outside the existence theory",
            params.alpha
        )
    });

    let diag_times = cfg.diagnostics_times();
    let snap_times = cfg.snapshot_times();
    let snap_dir = out_dir.map(|d| d.join("snapshots"));
    let mut stops: Vec<f64> = diag_times.iter().chain(&snap_times).copied().chain([params.t_final]).collect();
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let m0 = integrate(&state.n);
    let mut stats = StepStats {
        steps: 0,
        max_div_residual: divergence(&state.u).max_abs(),
        min_n: state.n.min(),
        min_c: state.c.min(),
        max_c_increase: f64::NEG_INFINITY,
        initial_mass: m0,
        max_mass_drift: 0.0,
    };
    let mut records: Vec<DiagnosticsRecord> = Vec::new();
    let mut diag_iter = diag_times.iter().peekable();
    let mut snap_iter = snap_times.iter().peekable();
    let mut snap_index = 0;

    for &stop in &stops {
        while state.t < stop {
            let dt = solver.stable_dt(&state)?;
            let remaining = stop - state.t;
            let (dt, t_next) = if remaining <= dt * (1.0 + 1e-9) {
                (remaining, stop)
            } else {
                (dt, state.t + dt)
            };
            let prev_max_c = state.c.max();
            state = solver.step(&state, dt).map_err(|e| match e {
                Error::Instability { reason, .. } => Error::Instability { t: t_next, reason },
                other => other,
            })?;
            state.t = t_next;
            stats.steps += 1;
            stats.max_div_residual = stats.max_div_residual.max(divergence(&state.u).max_abs());
            stats.min_n = stats.min_n.min(state.n.min());
            stats.min_c = stats.min_c.min(state.c.min());
            stats.max_c_increase = stats.max_c_increase.max(state.c.max() - prev_max_c);
            if m0 > 0.0 {
                stats.max_mass_drift = stats.max_mass_drift.max((integrate(&state.n) - m0).abs() / m0);
            }
        }
        if diag_iter.peek() == Some(&&stop) {
            diag_iter.next();
            let rec = DiagnosticsRecord::from_state(&state, &params, records.last())?;
            records.push(rec);
        }
        if snap_iter.peek() == Some(&&stop) {
            snap_iter.next();
            if let Some(dir) = &snap_dir {
                snapshot(dir, &cfg.output.snapshot_fields, &state, snap_index)?;
            }
            snap_index += 1;
        }
    }
    if stats.steps == 0 {
        stats.max_c_increase = 0.0;
    }

    let ceiling = cfg
        .output
        .energy_ceiling_factor
        .map(|f| f * records.first().map_or(1.0, |r| r.e_m.max(1.0)));
    let weak = weak_class_check(&records, &params, ceiling)?;
    let bounded = cfg
        .output
        .bounded_multiple
        .map(|m| bounded_class_check(&records, &params, m))
        .transpose()?;
    Ok(RunSummary {
        assumption_case,
        warning,
        stats,
        weak,
        bounded,
        records,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(t_final: f64, extra_output: &str) -> Config {
        let text = format!(
            r#"{{
            "params": {{"alpha": 0.5, "tau": 1, "rho": 0.05, "t_final": {t_final}}},
            "model": {{"chi_offset": 1, "chi_slope": 0.5, "kappa_coeff": 1, "kappa_power": 1}},
            "domain": {{"mode": "periodic", "lengths": [2, 2], "resolution": [16, 16]}},
            "initial": {{
                "n": {{"kind": "gaussian_bumps", "bumps": [{{"center": [0, 0], "width": 0.4, "mass": 1}}], "perturbation": 0.05}},
                "c": {{"kind": "cosine", "mean": 1, "amplitude": 0.5, "wavenumbers": [1, 1]}},
                "u": {{"kind": "vortex", "amplitude": 1, "width": 0.5}}
            }},
            "output": {{"snapshot_times": [] {extra_output}}}
        }}"#
        );
        Config::from_json(&text, Path::new(".")).unwrap()
    }

    #[test]
    fn zero_final_time_gives_one_record() {
        let s = simulate(&config(0.0, "")).unwrap();
        assert_eq!(s.records.len(), 1);
        assert_eq!(s.records[0].t, 0.0);
        assert_eq!(s.stats.steps, 0);
    }

    #[test]
    fn samples_land_on_requested_times() {
        let s = simulate(&config(0.02, r#", "diagnostics_times": [0, 0.005, 0.0125, 0.02]"#)).unwrap();
        let ts: Vec<f64> = s.records.iter().map(|r| r.t).collect();
        assert_eq!(ts, vec![0.0, 0.005, 0.0125, 0.02]);
        assert!(s.stats.max_mass_drift <= 1e-12, "{:?}", s.stats);
        assert!(s.stats.min_n >= 0.0 && s.stats.min_c >= 0.0);
        assert!(s.stats.max_c_increase <= 1e-10);
        assert!(s.stats.max_div_residual <= 1e-10);
    }

    #[test]
    fn repeated_simulation_is_identical() {
        let a = simulate(&config(0.01, "")).unwrap();
        let b = simulate(&config(0.01, "")).unwrap();
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn run_writes_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = config(0.005, r#", "diagnostics_times": [0, 0.005]"#);
        cfg.output.dir = dir.path().to_path_buf();
        cfg.output.snapshot_times = Some(vec![0.005]);
        run(&cfg).unwrap();
        let csv = fs::read_to_string(dir.path().join("diagnostics.csv")).unwrap();
        assert_eq!(csv.lines().count(), 3);
        let header: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
        assert!(header["summary"]["warning"].is_null());
        assert!(dir.path().join("snapshots/n_0000.bin").exists());
        assert!(dir.path().join("snapshots/u1_0000.json").exists());
    }

    #[test]
    fn unclassified_parameters_warn() {
        let mut cfg = config(0.0, "");
        cfg.model.kappa_power = 2.0;
        cfg.model.chi_slope = 0.0;
        cfg.params.alpha = 0.1;
        let s = simulate(&cfg).unwrap();
        assert!(s.warning.is_some());
    }
}
