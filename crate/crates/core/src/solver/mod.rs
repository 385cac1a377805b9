//! Time integration of the regularized chemotaxis–fluid system.
//!
//! One step of size `dt` from `(n, c, u)` at `t`:
//!
//! 1. `n`: conservative update `n + dt · div(grad g(n) - w n)` with
//!    `g(n) = (n+ρ)^{1+α}`, face velocity `w = χ(c) ∂c + ū`, upwinded `w n`.
//! 2. `c`: explicit upwind advection by `u`, implicit compact diffusion, then
//!    the implicit consumption factor `c / (1 + dt n κ_b c^{m-1})`.
//! 3. `u`: explicit buoyancy `-n ∇φ` and (τ = 1) upwind convection, implicit
//!    viscous diffusion, then the discrete Leray projection.
//!
//! Every face flux is shared by the two cells it separates, so the total of
//! `n` changes only by round-off. Neumann walls carry zero flux.

mod neumann;

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{coords, divergence, neighbours, strides, Ghost, ScalarField, VectorField};
use crate::model::{BoundaryMode, ChiKappaModel, DomainSpec, SimParams};
use crate::spectral::Spectral;

pub use neumann::solve_helmholtz as neumann_helmholtz;

/// Most negative density a step may produce before it is declared unstable.
pub const NEGATIVITY_TOLERANCE: f64 = 1e-13;

/// Discrete fields at one time instant.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldState {
    pub t: f64,
    pub n: ScalarField,
    pub c: ScalarField,
    pub u: VectorField,
    /// Pressure with zero mean.
    pub p: ScalarField,
}

impl FieldState {
    pub fn zeros(domain: DomainSpec) -> Self {
        FieldState {
            t: 0.0,
            n: ScalarField::zeros(domain),
            c: ScalarField::zeros(domain),
            u: VectorField::zeros(domain),
            p: ScalarField::zeros(domain),
        }
    }

    pub fn domain(&self) -> &DomainSpec {
        self.n.domain()
    }

    pub fn is_finite(&self) -> bool {
        self.n.is_finite() && self.c.is_finite() && self.u.is_finite() && self.p.is_finite()
    }
}

/// Source terms added to the right-hand sides (manufactured solutions).
pub struct ForcingFields {
    pub n: ScalarField,
    pub c: ScalarField,
    pub u: VectorField,
}

pub trait Forcing: Send + Sync {
    /// Forcing evaluated at the start of a step.
    fn at(&self, t: f64, domain: &DomainSpec) -> ForcingFields;
}

/// Helmholtz–Leray split `v = u + gradient(p)`.
#[derive(Clone, Debug)]
pub struct Projected {
    pub u: VectorField,
    pub p: ScalarField,
    /// `max |divergence(u)|`.
    pub residual: f64,
}

/// Step driver with cached FFT plans.
pub struct Solver {
    params: SimParams,
    model: ChiKappaModel,
    spectral: Option<Spectral>,
    forcing: Option<Arc<dyn Forcing>>,
}

impl std::fmt::Debug for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Solver")
            .field("params", &self.params)
            .field("model", &self.model)
            .field("forced", &self.forcing.is_some())
            .finish()
    }
}

/// Index of the plus / minus neighbour along `axis`, `None` across a wall.
#[inline]
fn step_index(d: &DomainSpec, idx: usize, coord: usize, axis: usize, plus: bool) -> Option<usize> {
    let n = d.resolution[axis];
    let s = strides(d)[axis];
    let periodic = d.mode == BoundaryMode::Periodic;
    match (plus, coord) {
        (true, c) if c + 1 < n => Some(idx + s),
        (true, _) => periodic.then(|| idx - (n - 1) * s),
        (false, 0) => periodic.then(|| idx + (n - 1) * s),
        (false, _) => Some(idx - s),
    }
}

impl Solver {
    pub fn new(params: SimParams, model: ChiKappaModel) -> Result<Self> {
        params.validate()?;
        let bad = model.violations();
        if !bad.is_empty() {
            return Err(Error::Config(bad));
        }
        let spectral = match params.domain.mode {
            BoundaryMode::Periodic => Some(Spectral::new(params.domain)?),
            BoundaryMode::Neumann => None,
        };
        Ok(Solver {
            params,
            model,
            spectral,
            forcing: None,
        })
    }

    pub fn with_forcing(mut self, forcing: Arc<dyn Forcing>) -> Self {
        self.forcing = Some(forcing);
        self
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn model(&self) -> &ChiKappaModel {
        &self.model
    }

    /// Face velocity `χ(c_f) (c⁺ - c)/h + (u + u⁺)/2` on the plus face of
    /// every cell along `axis`; zero on neumann walls.
    pub fn face_velocity(&self, c: &ScalarField, u: &VectorField, axis: usize) -> Vec<f64> {
        let d = *c.domain();
        let h = d.cell_size(axis);
        let cv = c.values();
        let uv = u.component(axis).values();
        (0..d.len())
            .into_par_iter()
            .map(|idx| {
                let coord = coords(&d, idx)[axis];
                match step_index(&d, idx, coord, axis, true) {
                    Some(j) => {
                        let cf = 0.5 * (cv[idx] + cv[j]);
                        self.model.chi(cf) * (cv[j] - cv[idx]) / h + 0.5 * (uv[idx] + uv[j])
                    }
                    None => 0.0,
                }
            })
            .collect()
    }

    /// Largest stable step for the explicit part of the scheme.
    ///
    /// `cfl_safety · min(diffusion, transport)` with the diffusion limit
    /// `1/(2(1+α)(max n + ρ)^α Σ 1/h_a²)` and the transport limit
    /// `1/(2 Σ W_a/h_a)`, `W_a` the largest face or cell speed along axis `a`.
    /// With `cfl_safety <= 1/2` the `n` update is a convex combination.
    pub fn stable_dt(&self, state: &FieldState) -> Result<f64> {
        let d = self.params.domain;
        let n_max = state.n.max();
        let u_max = state.u.max_norm();
        if !state.n.is_finite() || !state.u.is_finite() {
            return Err(Error::DegenerateState(format!(
                "max n = {n_max}, max |u| = {u_max}"
            )));
        }
        let alpha = self.params.alpha;
        let inv_h2: f64 = (0..d.dim).map(|a| d.cell_size(a).powi(-2)).sum();
        let diffusivity = (1.0 + alpha) * (n_max.max(0.0) + self.params.rho).powf(alpha);
        let diffusion = 1.0 / (2.0 * diffusivity * inv_h2);
        let mut rate = 0.0;
        for a in 0..d.dim {
            let w = self.face_velocity(&state.c, &state.u, a);
            let wmax = w.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            let umax = state.u.component(a).max_abs();
            rate += wmax.max(umax) / d.cell_size(a);
        }
        let transport = if rate > 0.0 { 1.0 / (2.0 * rate) } else { f64::INFINITY };
        let mut dt = self.params.cfl_safety * diffusion.min(transport);
        if let Some(cap) = self.params.dt_max {
            dt = dt.min(cap);
        }
        Ok(dt)
    }

    /// Discrete Leray projection of `v`.
    pub fn project(&self, v: &VectorField) -> Result<Projected> {
        let (u, p) = match &self.spectral {
            Some(s) => {
                let pr = s.project(v);
                (pr.u, pr.p)
            }
            None => neumann::project(v)?,
        };
        let residual = divergence(&u).max_abs();
        Ok(Projected { u, p, residual })
    }

    /// `dn/dt` from the conservative face fluxes.
    fn density_rate(&self, n: &ScalarField, c: &ScalarField, u: &VectorField) -> ScalarField {
        let d = *n.domain();
        let rho = self.params.rho;
        let expo = 1.0 + self.params.alpha;
        let g: Vec<f64> = n.values().par_iter().map(|&v| (v + rho).powf(expo)).collect();
        let nv = n.values();
        let mut rate = vec![0.0; d.len()];
        for axis in 0..d.dim {
            let h = d.cell_size(axis);
            let w = self.face_velocity(c, u, axis);
            let flux: Vec<f64> = (0..d.len())
                .into_par_iter()
                .map(|idx| {
                    let coord = coords(&d, idx)[axis];
                    match step_index(&d, idx, coord, axis, true) {
                        Some(j) => {
                            let wf = w[idx];
                            (g[j] - g[idx]) / h - (wf.max(0.0) * nv[idx] + wf.min(0.0) * nv[j])
                        }
                        None => 0.0,
                    }
                })
                .collect();
            rate.par_iter_mut().enumerate().for_each(|(idx, r)| {
                let coord = coords(&d, idx)[axis];
                let behind = step_index(&d, idx, coord, axis, false).map_or(0.0, |j| flux[j]);
                *r += (flux[idx] - behind) / h;
            });
        }
        ScalarField::from_values(d, rate).expect("domain-sized")
    }

    /// First-order upwind `(a·∇) f` with the given ghost rule.
    fn upwind_advection(a: &VectorField, f: &ScalarField, ghost: Ghost) -> ScalarField {
        let d = *f.domain();
        let fv = f.values();
        let out = (0..d.len())
            .into_par_iter()
            .map(|idx| {
                let c = coords(&d, idx);
                let mut acc = 0.0;
                for axis in 0..d.dim {
                    let speed = a.component(axis).values()[idx];
                    if speed == 0.0 {
                        continue;
                    }
                    let (m, p) = neighbours(fv, &d, idx, c[axis], axis, ghost);
                    let h = d.cell_size(axis);
                    acc += if speed > 0.0 {
                        speed * (fv[idx] - m) / h
                    } else {
                        speed * (p - fv[idx]) / h
                    };
                }
                acc
            })
            .collect();
        ScalarField::from_values(d, out).expect("domain-sized")
    }

    fn helmholtz(&self, f: &ScalarField, coeff: f64, ghost: Ghost) -> Result<ScalarField> {
        match &self.spectral {
            Some(s) => Ok(s.solve_helmholtz(f, coeff)),
            None => neumann::solve_helmholtz(f, coeff, ghost),
        }
    }

    /// Advance `state` by `dt`.
    pub fn step(&self, state: &FieldState, dt: f64) -> Result<FieldState> {
        if !(dt >= 0.0 && dt.is_finite()) {
            return Err(Error::invalid("dt", format!("time step must be finite and >= 0 (got {dt})")));
        }
        if dt == 0.0 {
            return Ok(state.clone());
        }
        let d = *state.domain();
        let forcing = self.forcing.as_ref().map(|f| f.at(state.t, &d));
        let (n0, c0, u0) = (&state.n, &state.c, &state.u);

        // density
        let dn = self.density_rate(n0, c0, u0);
        let mut n = n0.zip_map(&dn, |v, r| v + dt * r);
        if let Some(f) = &forcing {
            n = n.zip_map(&f.n, |v, s| v + dt * s);
        }

        // oxygen
        let adv = Self::upwind_advection(u0, c0, Ghost::Even);
        let mut c = c0.zip_map(&adv, |v, a| v - dt * a);
        if let Some(f) = &forcing {
            c = c.zip_map(&f.c, |v, s| v + dt * s);
        }
        let c = self.helmholtz(&c, dt, Ghost::Even)?.map(|v| v.max(0.0));
        let model = self.model;
        let consumed: Vec<f64> = c
            .values()
            .par_iter()
            .zip(n0.values().par_iter())
            .map(|(&cv, &nv)| cv / (1.0 + dt * nv.max(0.0) * model.kappa_over_c(cv)))
            .collect();
        let c = ScalarField::from_values(d, consumed)?;

        // fluid
        let phi = self.params.phi_gradient;
        let mut comps = Vec::with_capacity(d.dim);
        for a in 0..d.dim {
            let ua = u0.component(a);
            let mut rhs = ua.zip_map(n0, |v, nv| v - dt * nv * phi[a]);
            if self.params.tau == 1 {
                let conv = Self::upwind_advection(u0, ua, Ghost::Odd);
                rhs = rhs.zip_map(&conv, |v, k| v - dt * k);
            }
            if let Some(f) = &forcing {
                rhs = rhs.zip_map(f.u.component(a), |v, s| v + dt * s);
            }
            comps.push(rhs);
        }
        let v = VectorField::from_components(comps)?;
        let (u, p) = match &self.spectral {
            Some(s) => {
                let pr = s.diffuse_and_project(&v, dt);
                (pr.u, pr.p)
            }
            None => {
                let diffused = v
                    .components()
                    .iter()
                    .map(|comp| neumann::solve_helmholtz(comp, dt, Ghost::Odd))
                    .collect::<Result<Vec<_>>>()?;
                neumann::project(&VectorField::from_components(diffused)?)?
            }
        };
        let p = p.map(|v| v / dt);

        let next = FieldState {
            t: state.t + dt,
            n,
            c,
            u,
            p,
        };
        if !next.is_finite() {
            return Err(Error::Instability {
                t: next.t,
                reason: "non-finite field value".into(),
            });
        }
        let n_min = next.n.min();
        if n_min < -NEGATIVITY_TOLERANCE {
            return Err(Error::Instability {
                t: next.t,
                reason: format!("min n = {n_min:e}"),
            });
        }
        Ok(next)
    }
}

impl Solver {
    /// Step from `state` to exactly `t_end`, with `fixed_dt` if given and
    /// `stable_dt` otherwise; the last step is shortened to land on `t_end`.
    /// Returns the final state and the number of steps taken.
    pub fn advance(&self, state: &FieldState, t_end: f64, fixed_dt: Option<f64>) -> Result<(FieldState, usize)> {
        let mut s = state.clone();
        let mut steps = 0;
        while s.t < t_end {
            let dt = match fixed_dt {
                Some(dt) => dt,
                None => self.stable_dt(&s)?,
            };
            if !(dt > 0.0) {
                return Err(Error::invalid("dt", format!("time step must be > 0 to advance (got {dt})")));
            }
            // Absorb a last sliver instead of taking a near-zero step.
            let remaining = t_end - s.t;
            let dt = if remaining <= dt * (1.0 + 1e-9) { remaining } else { dt };
            let t_next = if dt == remaining { t_end } else { s.t + dt };
            s = self.step(&s, dt)?;
            s.t = t_next;
            steps += 1;
        }
        Ok((s, steps))
    }
}

/// One-shot [`Solver::stable_dt`].
pub fn stable_dt(state: &FieldState, params: &SimParams, model: &ChiKappaModel) -> Result<f64> {
    Solver::new(*params, *model)?.stable_dt(state)
}

/// One-shot [`Solver::step`]; prefer a reused [`Solver`] in loops.
pub fn step(state: &FieldState, params: &SimParams, model: &ChiKappaModel, dt: f64) -> Result<FieldState> {
    Solver::new(*params, *model)?.step(state, dt)
}

/// Leray projection on `v`'s own domain.
pub fn project(v: &VectorField) -> Result<Projected> {
    let d = *v.domain();
    let (u, p) = match d.mode {
        BoundaryMode::Periodic => {
            let pr = Spectral::new(d)?.project(v);
            (pr.u, pr.p)
        }
        BoundaryMode::Neumann => neumann::project(v)?,
    };
    let residual = divergence(&u).max_abs();
    Ok(Projected { u, p, residual })
}
