//! Independent reference solutions and the studies that compare the solver
//! against them.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::grid::{integrate, ScalarField, VectorField};
use crate::model::{BoundaryMode, ChiKappaModel, DomainSpec, SimParams};
use crate::solver::{FieldState, Forcing, ForcingFields, Solver};

/// `c(t)` for `dc/dt = -κ(c) n̄`, `c(0) = c̄`, with `κ(c) = κ_b c^m`.
///
/// Separable for every `m >= 1`: exponential decay at `m = 1`, otherwise
/// `c^{1-m} = c̄^{1-m} + (m-1) κ_b n̄ t`.
pub fn uniform_state_ode(n_bar: f64, c_bar: f64, model: &ChiKappaModel, t: f64) -> Result<f64> {
    for (key, v) in [("n_bar", n_bar), ("c_bar", c_bar), ("t", t)] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::invalid(key, format!("must be finite and >= 0 (got {v})")));
        }
    }
    let rate = model.kappa_coeff * n_bar;
    let m = model.kappa_power;
    if c_bar == 0.0 || rate == 0.0 {
        return Ok(c_bar);
    }
    if m == 1.0 {
        return Ok(c_bar * (-rate * t).exp());
    }
    if m == 2.0 {
        return Ok(c_bar / (1.0 + c_bar * rate * t));
    }
    Ok((c_bar.powf(1.0 - m) + (m - 1.0) * rate * t).powf(1.0 / (1.0 - m)))
}

/// Self-similar source solution of `∂t n = Δ n^{1+α}` in `dim` dimensions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Barenblatt {
    pub alpha: f64,
    pub mass: f64,
    pub dim: usize,
    /// `t^{-β}` is the spatial scale exponent.
    beta: f64,
    k: f64,
    /// Height constant fixed by the mass.
    height: f64,
}

impl Barenblatt {
    pub fn new(alpha: f64, mass: f64, dim: usize) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid("alpha", format!("must be > 0 (got {alpha})")));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::invalid("mass", format!("must be > 0 (got {mass})")));
        }
        if !(1..=3).contains(&dim) {
            return Err(Error::invalid("dim", format!("must be 1, 2 or 3 (got {dim})")));
        }
        let m = 1.0 + alpha;
        let d = dim as f64;
        let beta = 1.0 / (d * (m - 1.0) + 2.0);
        let k = (m - 1.0) * beta / (2.0 * m);
        let gamma = 1.0 / (m - 1.0);
        // ∫ (1 - |y|²)_+^γ dy = π^{d/2} Γ(γ+1) / Γ(γ+1+d/2)
        let ln_unit = 0.5 * d * PI.ln() + ln_gamma(gamma + 1.0) - ln_gamma(gamma + 1.0 + 0.5 * d);
        // mass = height^{γ + d/2} k^{-d/2} · unit
        let ln_height = (mass.ln() + 0.5 * d * k.ln() - ln_unit) / (gamma + 0.5 * d);
        Ok(Barenblatt {
            alpha,
            mass,
            dim,
            beta,
            k,
            height: ln_height.exp(),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Radius of the support at time `t`.
    pub fn support_radius(&self, t: f64) -> f64 {
        (self.height / self.k).sqrt() * t.powf(self.beta)
    }

    pub fn value(&self, t: f64, x: [f64; 3]) -> f64 {
        let r2: f64 = x[..self.dim].iter().map(|v| v * v).sum();
        let core = self.height - self.k * r2 * t.powf(-2.0 * self.beta);
        if core <= 0.0 {
            return 0.0;
        }
        t.powf(-(self.dim as f64) * self.beta) * core.powf(1.0 / self.alpha)
    }

    pub fn field(&self, domain: DomainSpec, t: f64) -> ScalarField {
        ScalarField::from_fn(domain, |x| self.value(t, x))
    }
}

/// One-shot [`Barenblatt::value`].
pub fn barenblatt(alpha: f64, mass: f64, dim: usize, t: f64, x: [f64; 3]) -> Result<f64> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::invalid("t", format!("must be > 0 (got {t})")));
    }
    Ok(Barenblatt::new(alpha, mass, dim)?.value(t, x))
}

/// Observed convergence orders `log2`-style between successive errors,
/// for refinement ratios given by `steps`.
pub fn observed_orders(errors: &[f64], steps: &[f64]) -> Vec<f64> {
    errors
        .windows(2)
        .zip(steps.windows(2))
        .map(|(e, s)| (e[0] / e[1]).ln() / (s[0] / s[1]).ln())
        .collect()
}

// ---------------------------------------------------------------- uniform

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniformStudyConfig {
    pub alpha: f64,
    #[serde(default = "one")]
    pub n_bar: f64,
    #[serde(default = "one")]
    pub c_bar: f64,
    pub model: ChiKappaModel,
    pub t_final: f64,
    pub dts: Vec<f64>,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UniformStudy {
    pub dts: Vec<f64>,
    /// `max_t |c - c_exact| / c_exact` over the sampled steps.
    pub max_rel_errors: Vec<f64>,
    /// Relative error of `c(T)`.
    pub final_rel_errors: Vec<f64>,
    pub orders: Vec<f64>,
}

/// Relative tolerance on `c(T)` once `dt <= UNIFORM_DT_CEILING`.
pub const UNIFORM_REL_TOL: f64 = 1e-4;
pub const UNIFORM_DT_CEILING: f64 = 1e-3;
pub const UNIFORM_MIN_ORDER: f64 = 0.9;

impl UniformStudy {
    /// Every run with `dt <= UNIFORM_DT_CEILING` meets `UNIFORM_REL_TOL` and
    /// every observed order is at least `UNIFORM_MIN_ORDER`.
    pub fn passed(&self) -> bool {
        let fine = self
            .dts
            .iter()
            .zip(&self.final_rel_errors)
            .filter(|(dt, _)| **dt <= UNIFORM_DT_CEILING)
            .all(|(_, e)| *e <= UNIFORM_REL_TOL);
        fine && !self.orders.is_empty() && self.orders.iter().all(|&o| o >= UNIFORM_MIN_ORDER)
    }
}

/// Run spatially uniform states with fixed steps and compare `c` to
/// [`uniform_state_ode`]. `n` and `u` must remain exactly stationary.
pub fn uniform_study(cfg: &UniformStudyConfig) -> Result<UniformStudy> {
    let domain = DomainSpec::new(BoundaryMode::Periodic, &[1.0], &[8])?;
    let params = SimParams::new(cfg.alpha, 0, 0.01, cfg.t_final, domain);
    let solver = Solver::new(params, cfg.model)?;
    let mut max_rel = Vec::new();
    let mut final_rel = Vec::new();
    for &dt in &cfg.dts {
        if !(dt > 0.0) {
            return Err(Error::invalid("dts", format!("steps must be > 0 (got {dt})")));
        }
        let mut s = FieldState::zeros(domain);
        s.n = ScalarField::constant(domain, cfg.n_bar);
        s.c = ScalarField::constant(domain, cfg.c_bar);
        let steps = (cfg.t_final / dt).round() as usize;
        let mut worst: f64 = 0.0;
        let mut last = 0.0;
        for i in 1..=steps {
            s = solver.step(&s, dt)?;
            let exact = uniform_state_ode(cfg.n_bar, cfg.c_bar, &cfg.model, i as f64 * dt)?;
            let rel = if exact > 0.0 { (s.c.mean() - exact).abs() / exact } else { s.c.mean().abs() };
            worst = worst.max(rel);
            last = rel;
        }
        if s.n.values().iter().any(|&v| v != cfg.n_bar) || s.u.max_norm() != 0.0 {
            return Err(Error::DegenerateState("uniform state drifted in n or u".into()));
        }
        max_rel.push(worst);
        final_rel.push(last);
    }
    let orders = observed_orders(&max_rel, &cfg.dts);
    Ok(UniformStudy {
        dts: cfg.dts.clone(),
        max_rel_errors: max_rel,
        final_rel_errors: final_rel,
        orders,
    })
}

// ---------------------------------------------------------------- barenblatt

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarenblattStudyConfig {
    pub alpha: f64,
    #[serde(default = "default_bb_rho")]
    pub rho: f64,
    #[serde(default = "one")]
    pub mass: f64,
    pub length: f64,
    pub t_start: f64,
    pub t_end: f64,
    pub resolutions: Vec<usize>,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
}

fn default_bb_rho() -> f64 {
    1e-6
}

fn default_cfl() -> f64 {
    SimParams::DEFAULT_CFL_SAFETY
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BarenblattStudy {
    pub resolutions: Vec<usize>,
    pub l1_errors: Vec<f64>,
    pub orders: Vec<f64>,
    pub steps: Vec<usize>,
    /// Relative mass drift of each run.
    pub mass_drift: Vec<f64>,
}

impl BarenblattStudy {
    pub fn strictly_decreasing(&self) -> bool {
        self.l1_errors.windows(2).all(|w| w[1] < w[0])
    }
}

/// 1D runs with `χ = 0`, `u = 0`, started from the profile at `t_start`.
pub fn barenblatt_study(cfg: &BarenblattStudyConfig) -> Result<BarenblattStudy> {
    let profile = Barenblatt::new(cfg.alpha, cfg.mass, 1)?;
    if profile.support_radius(cfg.t_end) >= cfg.length / 2.0 {
        return Err(Error::invalid("length", "support reaches the boundary before t_end"));
    }
    if !(cfg.t_start > 0.0 && cfg.t_end > cfg.t_start) {
        return Err(Error::invalid("t_start", "need 0 < t_start < t_end"));
    }
    let model = ChiKappaModel::new(0.0, 0.0, 0.0, 1.0)?;
    let mut out = BarenblattStudy {
        resolutions: cfg.resolutions.clone(),
        l1_errors: Vec::new(),
        orders: Vec::new(),
        steps: Vec::new(),
        mass_drift: Vec::new(),
    };
    for &n in &cfg.resolutions {
        let domain = DomainSpec::new(BoundaryMode::Periodic, &[cfg.length], &[n])?;
        let mut params = SimParams::new(cfg.alpha, 0, cfg.rho, cfg.t_end, domain);
        params.cfl_safety = cfg.cfl_safety;
        let solver = Solver::new(params, model)?;
        let mut s = FieldState::zeros(domain);
        s.t = cfg.t_start;
        s.n = profile.field(domain, cfg.t_start);
        let m0 = integrate(&s.n);
        let (end, steps) = solver.advance(&s, cfg.t_end, None)?;
        let exact = profile.field(domain, cfg.t_end);
        out.l1_errors.push(integrate(&end.n.zip_map(&exact, |a, b| (a - b).abs())));
        out.mass_drift.push((integrate(&end.n) - m0).abs() / m0);
        out.steps.push(steps);
    }
    let hs: Vec<f64> = cfg.resolutions.iter().map(|&n| cfg.length / n as f64).collect();
    out.orders = observed_orders(&out.l1_errors, &hs);
    Ok(out)
}

// ---------------------------------------------------------------- manufactured

/// Smooth periodic exact solution on `[-π, π]^dim` (varying in the first two
/// axes) and the forcing that makes it solve the regularized system.
///
/// * `n* = 1 + a_n e^{-t} sin x sin y`
/// * `c* = 3/2 + a_c cos(x - t) sin y`
/// * `u* = a_u e^{-t} (sin x cos y, -cos x sin y, 0)`, the curl of
///   `a_u e^{-t} sin x sin y`, so `div u* = 0` also discretely.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manufactured {
    pub alpha: f64,
    pub tau: u8,
    pub rho: f64,
    pub model: ChiKappaModel,
    pub phi_gradient: [f64; 3],
    pub a_n: f64,
    pub a_c: f64,
    pub a_u: f64,
}

/// Pointwise exact values and derivatives in the first two axes.
struct Jet {
    v: f64,
    t: f64,
    grad: [f64; 2],
    lap: f64,
}

impl Manufactured {
    fn n_jet(&self, t: f64, x: [f64; 3]) -> Jet {
        let e = (-t).exp() * self.a_n;
        let (sx, cx, sy, cy) = (x[0].sin(), x[0].cos(), x[1].sin(), x[1].cos());
        Jet {
            v: 1.0 + e * sx * sy,
            t: -e * sx * sy,
            grad: [e * cx * sy, e * sx * cy],
            lap: -2.0 * e * sx * sy,
        }
    }

    fn c_jet(&self, t: f64, x: [f64; 3]) -> Jet {
        let a = self.a_c;
        let (s, c) = ((x[0] - t).sin(), (x[0] - t).cos());
        let (sy, cy) = (x[1].sin(), x[1].cos());
        Jet {
            v: 1.5 + a * c * sy,
            t: a * s * sy,
            grad: [-a * s * sy, a * c * cy],
            lap: -2.0 * a * c * sy,
        }
    }

    /// `(u, (u·∇)u)` in the first two axes.
    fn u_parts(&self, t: f64, x: [f64; 3]) -> ([f64; 2], [f64; 2]) {
        let a = self.a_u * (-t).exp();
        let (sx, cx, sy, cy) = (x[0].sin(), x[0].cos(), x[1].sin(), x[1].cos());
        ([a * sx * cy, -a * cx * sy], [a * a * sx * cx, a * a * sy * cy])
    }

    pub fn domain(&self, dim: usize, n: usize) -> Result<DomainSpec> {
        if dim < 2 {
            return Err(Error::invalid("dim", "the manufactured solution needs at least two axes"));
        }
        DomainSpec::new(BoundaryMode::Periodic, &vec![2.0 * PI; dim], &vec![n; dim])
    }

    pub fn params(&self, domain: DomainSpec, t_final: f64) -> SimParams {
        let mut p = SimParams::new(self.alpha, self.tau, self.rho, t_final, domain);
        p.phi_gradient = self.phi_gradient;
        p
    }

    pub fn exact(&self, domain: DomainSpec, t: f64) -> Result<FieldState> {
        if domain.mode != BoundaryMode::Periodic || domain.dim < 2 {
            return Err(Error::UnsupportedMode {
                mode: domain.mode.name(),
                what: "manufactured solution (periodic, dim >= 2)".into(),
            });
        }
        let mut s = FieldState::zeros(domain);
        s.t = t;
        s.n = ScalarField::from_fn(domain, |x| self.n_jet(t, x).v);
        s.c = ScalarField::from_fn(domain, |x| self.c_jet(t, x).v);
        let mut comps = vec![
            ScalarField::from_fn(domain, |x| self.u_parts(t, x).0[0]),
            ScalarField::from_fn(domain, |x| self.u_parts(t, x).0[1]),
        ];
        if domain.dim == 3 {
            comps.push(ScalarField::zeros(domain));
        }
        s.u = VectorField::from_components(comps)?;
        Ok(s)
    }

    /// `f_n = n_t - Δ(n+ρ)^{1+α} + div(n χ(c) ∇c) + u·∇n`.
    pub fn forcing_n(&self, t: f64, x: [f64; 3]) -> f64 {
        let n = self.n_jet(t, x);
        let c = self.c_jet(t, x);
        let (u, _) = self.u_parts(t, x);
        let m = 1.0 + self.alpha;
        let base = n.v + self.rho;
        let g1 = m * base.powf(m - 1.0);
        let g2 = m * (m - 1.0) * base.powf(m - 2.0);
        let grad_n2 = n.grad[0].powi(2) + n.grad[1].powi(2);
        let grad_c2 = c.grad[0].powi(2) + c.grad[1].powi(2);
        let gn_gc = n.grad[0] * c.grad[0] + n.grad[1] * c.grad[1];
        let chi = self.model.chi(c.v);
        let lap_g = g1 * n.lap + g2 * grad_n2;
        let taxis = chi * gn_gc + n.v * self.model.chi_prime(c.v) * grad_c2 + n.v * chi * c.lap;
        n.t - lap_g + taxis + u[0] * n.grad[0] + u[1] * n.grad[1]
    }

    /// `f_c = c_t + u·∇c - Δc + κ(c) n`.
    pub fn forcing_c(&self, t: f64, x: [f64; 3]) -> f64 {
        let n = self.n_jet(t, x);
        let c = self.c_jet(t, x);
        let (u, _) = self.u_parts(t, x);
        c.t + u[0] * c.grad[0] + u[1] * c.grad[1] - c.lap + self.model.kappa(c.v) * n.v
    }

    /// `f_u = u_t + τ (u·∇)u - Δu + n ∇φ`; `u_t = -u` and `Δu = -2u`.
    pub fn forcing_u(&self, t: f64, x: [f64; 3], axis: usize) -> f64 {
        let n = self.n_jet(t, x).v;
        let (u, conv) = self.u_parts(t, x);
        let tau = self.tau as f64;
        let flow = if axis < 2 { -u[axis] + tau * conv[axis] + 2.0 * u[axis] } else { 0.0 };
        flow + n * self.phi_gradient[axis]
    }
}

impl Forcing for Manufactured {
    fn at(&self, t: f64, domain: &DomainSpec) -> ForcingFields {
        let d = *domain;
        ForcingFields {
            n: ScalarField::from_fn(d, |x| self.forcing_n(t, x)),
            c: ScalarField::from_fn(d, |x| self.forcing_c(t, x)),
            u: VectorField::from_fn(d, |x| [0, 1, 2].map(|a| self.forcing_u(t, x, a))),
        }
    }
}

/// Error norms of one manufactured run against the exact fields at `t_final`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FieldErrors {
    pub n_l2: f64,
    pub c_l2: f64,
    pub u_l2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturedStudyConfig {
    pub problem: Manufactured,
    #[serde(default = "two")]
    pub dim: usize,
    pub t_final: f64,
    pub resolutions: Vec<usize>,
    /// `dt = dt_coarse · (h / h_coarse)²`, so time and space errors shrink together.
    pub dt_coarse: f64,
}

fn two() -> usize {
    2
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ManufacturedStudy {
    pub resolutions: Vec<usize>,
    pub errors: Vec<FieldErrors>,
    /// Spatial orders for `n`, `c`, `u` between successive resolutions.
    pub orders_n: Vec<f64>,
    pub orders_c: Vec<f64>,
    pub orders_u: Vec<f64>,
}

fn l2_diff(a: &ScalarField, b: &ScalarField) -> f64 {
    integrate(&a.zip_map(b, |x, y| (x - y).powi(2))).sqrt()
}

/// Spatial order the manufactured study must reach in every field.
pub const MANUFACTURED_MIN_ORDER: f64 = 1.5;

impl ManufacturedStudy {
    pub fn passed(&self) -> bool {
        let orders: Vec<f64> = self.orders_n.iter().chain(&self.orders_c).chain(&self.orders_u).copied().collect();
        !orders.is_empty() && orders.iter().all(|&o| o >= MANUFACTURED_MIN_ORDER)
    }
}

pub fn manufactured_study(cfg: &ManufacturedStudyConfig) -> Result<ManufacturedStudy> {
    let problem = cfg.problem;
    let coarse = *cfg
        .resolutions
        .first()
        .ok_or_else(|| Error::invalid("resolutions", "need at least one resolution"))?;
    let mut errors = Vec::new();
    for &n in &cfg.resolutions {
        let domain = problem.domain(cfg.dim, n)?;
        let solver = Solver::new(problem.params(domain, cfg.t_final), problem.model)?.with_forcing(Arc::new(problem));
        let ratio = coarse as f64 / n as f64;
        let dt = cfg.dt_coarse * ratio * ratio;
        let start = problem.exact(domain, 0.0)?;
        let (end, _) = solver.advance(&start, cfg.t_final, Some(dt))?;
        let exact = problem.exact(domain, cfg.t_final)?;
        let u_err = (0..domain.dim)
            .map(|a| l2_diff(end.u.component(a), exact.u.component(a)).powi(2))
            .sum::<f64>()
            .sqrt();
        errors.push(FieldErrors {
            n_l2: l2_diff(&end.n, &exact.n),
            c_l2: l2_diff(&end.c, &exact.c),
            u_l2: u_err,
        });
    }
    let hs: Vec<f64> = cfg.resolutions.iter().map(|&n| 1.0 / n as f64).collect();
    let pick = |f: fn(&FieldErrors) -> f64| observed_orders(&errors.iter().map(f).collect::<Vec<_>>(), &hs);
    Ok(ManufacturedStudy {
        resolutions: cfg.resolutions.clone(),
        orders_n: pick(|e| e.n_l2),
        orders_c: pick(|e| e.c_l2),
        orders_u: pick(|e| e.u_l2),
        errors,
    })
}
