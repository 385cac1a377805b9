use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num::BigRational;

use chemoflux::config::Config;
use chemoflux::ledger::{
    build_ledger, check_entry, format_rational, parse_rational, scan_region, scaling_check, LedgerEntry,
};
use chemoflux::oracle::{
    barenblatt_study, manufactured_study, uniform_study, BarenblattStudyConfig, ManufacturedStudyConfig,
    UniformStudyConfig,
};
use chemoflux::{run, Error, Result};

const THREADS_ENV: &str = "CHEMOFLUX_THREADS";

#[derive(Parser, Debug)]
#[command(name = "chemoflux", version, about = "Chemotaxis-fluid simulator, oracles and exponent ledger")]
struct Cli {
    /// Cap on worker threads (falls back to CHEMOFLUX_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate and write diagnostics.csv, run.json and snapshots.
    Run { config: PathBuf },
    /// Exponent ledger: catalog and scaling checks, a point check, or a lattice scan.
    Ledger {
        /// Exact rational, e.g. 1/3 or 0.25.
        #[arg(long, requires = "p", conflicts_with = "scan")]
        alpha: Option<String>,
        #[arg(long, requires = "alpha")]
        p: Option<String>,
        /// Interior lattice density per axis.
        #[arg(long)]
        scan: Option<usize>,
    },
    /// Run a verification study: uniform, barenblatt or manufactured.
    Oracle { name: OracleName, config: PathBuf },
    /// Print which assumption clauses a configuration satisfies.
    Classify { config: PathBuf },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum OracleName {
    Uniform,
    Barenblatt,
    Manufactured,
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let count = match flag {
        Some(n) => Some(n),
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| Error::invalid(THREADS_ENV, format!("expected a positive integer (got {v:?})")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = count {
        if n == 0 {
            return Err(Error::invalid("threads", "must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::invalid("threads", e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads(cli.threads).and_then(|()| match cli.command {
        Command::Run { config } => cmd_run(&config),
        Command::Ledger { alpha, p, scan } => cmd_ledger(alpha, p, scan),
        Command::Oracle { name, config } => cmd_oracle(name, &config),
        Command::Classify { config } => cmd_classify(&config),
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn cmd_run(path: &Path) -> Result<bool> {
    let cfg = Config::from_path(path)?;
    let s = run::run(&cfg)?;
    let last = s.records.last().expect("at least one record");
    if let Some(w) = &s.warning {
        eprintln!("warning: {w}");
    }
    println!("assumption case: {}", s.assumption_case);
    println!("steps: {}  t: {}  records: {}", s.stats.steps, last.t, s.records.len());
    println!("mass drift (max relative): {:.3e}", s.stats.max_mass_drift);
    println!("min n: {:.3e}  min c: {:.3e}", s.stats.min_n, s.stats.min_c);
    println!("max c increase per step: {:.3e}", s.stats.max_c_increase);
    println!("max |div u|: {:.3e}", s.stats.max_div_residual);
    println!("sup E_M: {:.6e}  int D: {:.6e}", s.weak.sup_e_m, s.weak.d_integral);
    println!("weak class: {}", status(s.weak.passed()));
    if let Some(b) = &s.bounded {
        println!(
            "bounded class: {} (sup max n {:.6e}, limit {:.6e})",
            status(b.within_bound),
            b.sup_max_n,
            b.multiple * b.initial_max_n
        );
    }
    println!("output: {}", cfg.output_dir().display());
    Ok(s.passed())
}

fn cmd_classify(path: &Path) -> Result<bool> {
    let cfg = Config::from_path(path)?;
    println!("{}", run::classify(&cfg)?);
    Ok(true)
}

fn cmd_ledger(alpha: Option<String>, p: Option<String>, scan: Option<usize>) -> Result<bool> {
    let ledger = build_ledger();
    match (alpha, p, scan) {
        (Some(a), Some(p), None) => ledger_point(&ledger, &parse_rational(&a)?, &parse_rational(&p)?),
        (None, None, Some(d)) => ledger_scan(&ledger, d),
        (None, None, None) => ledger_catalog(&ledger),
        _ => Err(Error::invalid("ledger", "use --alpha with --p, or --scan, or neither")),
    }
}

fn ledger_catalog(ledger: &[LedgerEntry]) -> Result<bool> {
    let mut ok = true;
    println!("{:<28} {:<8} {:<40} expressions", "id", "scaling", "region");
    for e in ledger {
        let sc = scaling_check(e);
        ok &= sc.is_ok();
        let exprs: Vec<String> = e.expressions.iter().map(|x| format!("{} = {}", x.name, x.formula)).collect();
        println!("{:<28} {:<8} {:<40} {}", e.id, sc.to_string(), e.region_text, exprs.join("; "));
    }
    Ok(ok)
}

fn ledger_point(ledger: &[LedgerEntry], alpha: &BigRational, p: &BigRational) -> Result<bool> {
    let mut ok = true;
    println!("alpha = {}, p = {}", format_rational(alpha), format_rational(p));
    println!("{:<28} {:<40} {:<16} {:<14} {:<22} result", "id", "region", "expression", "value", "claimed");
    for e in ledger {
        let c = check_entry(e, alpha, p)?;
        let verdict = if !c.applicable {
            "n/a"
        } else if c.passed() {
            "pass"
        } else {
            ok = false;
            "FAIL"
        };
        for b in &c.bounds {
            let value = b.value.as_ref().map_or_else(|| "undefined".to_string(), format_rational);
            println!(
                "{:<28} {:<40} {:<16} {:<14} {:<22} {}",
                e.id,
                e.region_text,
                b.name,
                value,
                b.interval_text(),
                if c.applicable { status(b.pass).to_lowercase() } else { verdict.to_string() }
            );
        }
        if !c.region_failures.is_empty() {
            println!("{:<28} outside region: {}", e.id, c.region_failures.join(", "));
        }
    }
    Ok(ok)
}

fn ledger_scan(ledger: &[LedgerEntry], density: usize) -> Result<bool> {
    let mut ok = true;
    println!(
        "{:<28} {:>9} {:>9} {:>14} {:>8}  ranges",
        "id", "interior", "pass", "collar n/a", "scaling"
    );
    for e in ledger {
        let s = scan_region(e, density)?;
        let sc = scaling_check(e);
        let row_ok = s.interior_points > 0 && s.all_interior_pass() && sc.is_ok();
        ok &= row_ok;
        let ranges: Vec<String> = s
            .ranges
            .iter()
            .map(|r| format!("{} in [{}, {}]", r.name, format_rational(&r.min), format_rational(&r.max)))
            .collect();
        println!(
            "{:<28} {:>9} {:>9} {:>9}/{:<4} {:>8}  {}",
            e.id,
            s.interior_points,
            s.interior_pass,
            s.collar_inapplicable,
            s.collar_points,
            status(sc.is_ok()),
            ranges.join("; ")
        );
        for ce in &s.counterexamples {
            println!(
                "  counterexample alpha = {}, p = {}: {}",
                format_rational(&ce.alpha),
                format_rational(&ce.p),
                ce.failing.join(", ")
            );
        }
    }
    println!("overall: {}", status(ok));
    Ok(ok)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn fmt_list(v: &[f64]) -> String {
    let items: Vec<String> = v.iter().map(|x| format!("{x:.4e}")).collect();
    format!("[{}]", items.join(", "))
}

fn cmd_oracle(name: OracleName, path: &Path) -> Result<bool> {
    match name {
        OracleName::Uniform => {
            let s = uniform_study(&read_json::<UniformStudyConfig>(path)?)?;
            println!("dt:              {}", fmt_list(&s.dts));
            println!("final rel error: {}", fmt_list(&s.final_rel_errors));
            println!("max rel error:   {}", fmt_list(&s.max_rel_errors));
            println!("observed order:  {}", fmt_list(&s.orders));
            println!("uniform: {}", status(s.passed()));
            Ok(s.passed())
        }
        OracleName::Barenblatt => {
            let s = barenblatt_study(&read_json::<BarenblattStudyConfig>(path)?)?;
            let ok = s.l1_errors.len() >= 2 && s.strictly_decreasing();
            println!("N:              {:?}", s.resolutions);
            println!("L1 error:       {}", fmt_list(&s.l1_errors));
            println!("observed order: {}", fmt_list(&s.orders));
            println!("mass drift:     {}", fmt_list(&s.mass_drift));
            println!("barenblatt: {}", status(ok));
            Ok(ok)
        }
        OracleName::Manufactured => {
            let s = manufactured_study(&read_json::<ManufacturedStudyConfig>(path)?)?;
            println!("N:         {:?}", s.resolutions);
            println!("n L2:      {}", fmt_list(&s.errors.iter().map(|e| e.n_l2).collect::<Vec<_>>()));
            println!("c L2:      {}", fmt_list(&s.errors.iter().map(|e| e.c_l2).collect::<Vec<_>>()));
            println!("u L2:      {}", fmt_list(&s.errors.iter().map(|e| e.u_l2).collect::<Vec<_>>()));
            println!("order n:   {}", fmt_list(&s.orders_n));
            println!("order c:   {}", fmt_list(&s.orders_c));
            println!("order u:   {}", fmt_list(&s.orders_u));
            println!("manufactured: {}", status(s.passed()));
            Ok(s.passed())
        }
    }
}
