//! JSON run configuration: parsing, defaults and validation.
//!
//! Each section is decoded on its own so that a malformed section does not
//! hide errors in the others; every problem found is reported at once.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::grid::{integrate, read_snapshot, ScalarField, VectorField};
use crate::model::{BoundaryMode, ChiKappaModel, DomainSpec, SimParams};
use crate::solver::project;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub alpha: f64,
    pub tau: u8,
    pub rho: f64,
    pub t_final: f64,
    #[serde(default = "default_em_weight")]
    pub em_weight: f64,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default)]
    pub phi_gradient: [f64; 3],
    #[serde(default)]
    pub dt_max: Option<f64>,
}

fn default_em_weight() -> f64 {
    SimParams::DEFAULT_EM_WEIGHT
}

fn default_cfl() -> f64 {
    SimParams::DEFAULT_CFL_SAFETY
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    pub mode: BoundaryMode,
    pub lengths: Vec<f64>,
    pub resolution: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub center: Vec<f64>,
    pub width: f64,
    pub mass: f64,
}

/// Initial density.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityInit {
    /// Sum of `mass · exp(-|x - center|²/width²)` normalized to the stated
    /// masses on the grid, times `1 + perturbation · U(-1, 1)`.
    GaussianBumps {
        bumps: Vec<Bump>,
        #[serde(default)]
        background: f64,
        #[serde(default)]
        perturbation: f64,
    },
    Constant {
        value: f64,
    },
    Snapshot {
        path: PathBuf,
    },
}

/// Initial oxygen.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum OxygenInit {
    Constant {
        value: f64,
    },
    /// `mean + amplitude · ∏_a cos(2π k_a x_a / L_a)`.
    Cosine {
        mean: f64,
        amplitude: f64,
        wavenumbers: Vec<u32>,
    },
    Snapshot {
        path: PathBuf,
    },
}

/// Initial velocity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum VelocityInit {
    Zero,
    /// `amplitude · (-y, x, 0) · exp(-(x² + y²)/width²)`, then projected.
    Vortex {
        amplitude: f64,
        width: f64,
    },
    /// One snapshot per component.
    Snapshot {
        paths: Vec<PathBuf>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub n: DensityInit,
    pub c: OxygenInit,
    #[serde(default = "zero_velocity")]
    pub u: VelocityInit,
    #[serde(default)]
    pub seed: u64,
}

fn zero_velocity() -> VelocityInit {
    VelocityInit::Zero
}

pub const DEFAULT_SAMPLES: usize = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    /// Diagnostics sample times; defaults to `DEFAULT_SAMPLES` even intervals.
    #[serde(default)]
    pub diagnostics_times: Option<Vec<f64>>,
    /// Snapshot times; defaults to `DEFAULT_SAMPLES` even intervals, `[]` disables.
    #[serde(default)]
    pub snapshot_times: Option<Vec<f64>>,
    #[serde(default = "default_fields")]
    pub snapshot_fields: Vec<String>,
    /// Ceiling on `sup E_M` as a multiple of `max(E_M(0), 1)`.
    #[serde(default)]
    pub energy_ceiling_factor: Option<f64>,
    /// Bound on `sup max n` as a multiple of `max n₀`.
    #[serde(default)]
    pub bounded_multiple: Option<f64>,
}

fn default_dir() -> PathBuf {
    PathBuf::from("output")
}

fn default_fields() -> Vec<String> {
    vec!["n".into(), "c".into(), "u".into()]
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: default_dir(),
            diagnostics_times: None,
            snapshot_times: None,
            snapshot_fields: default_fields(),
            energy_ceiling_factor: None,
            bounded_multiple: None,
        }
    }
}

/// A validated run description.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub params_section: ParamsSection,
    pub domain_section: DomainSection,
    pub model: ChiKappaModel,
    pub initial: InitialSection,
    pub output: OutputSection,
    #[serde(skip)]
    pub params: SimParams,
    /// Directory relative paths in the file are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn section<T: DeserializeOwned>(root: &Value, key: &str, errors: &mut Vec<String>) -> Option<T> {
    match root.get(key) {
        None => {
            errors.push(format!("{key}: missing section"));
            None
        }
        Some(v) => match serde_json::from_value(v.clone()) {
            Ok(t) => Some(t),
            Err(e) => {
                errors.push(format!("{key}: {e}"));
                None
            }
        },
    }
}

fn even_samples(t_final: f64) -> Vec<f64> {
    if t_final == 0.0 {
        return vec![0.0];
    }
    (0..=DEFAULT_SAMPLES).map(|k| t_final * k as f64 / DEFAULT_SAMPLES as f64).collect()
}

impl Config {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, &base)
    }

    /// Parse and validate; relative paths resolve against `base_dir`.
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self> {
        let root: Value = serde_json::from_str(text)?;
        let mut errors = Vec::new();
        if let Some(obj) = root.as_object() {
            for key in obj.keys() {
                if !["params", "model", "domain", "initial", "output"].contains(&key.as_str()) {
                    errors.push(format!("{key}: unknown section"));
                }
            }
        } else {
            return Err(Error::Config(vec!["configuration must be a JSON object".into()]));
        }
        let params: Option<ParamsSection> = section(&root, "params", &mut errors);
        let model: Option<ChiKappaModel> = section(&root, "model", &mut errors);
        let domain: Option<DomainSection> = section(&root, "domain", &mut errors);
        let initial: Option<InitialSection> = section(&root, "initial", &mut errors);
        let output: OutputSection = match root.get("output") {
            None => OutputSection::default(),
            Some(_) => section(&root, "output", &mut errors).unwrap_or_default(),
        };

        if let Some(m) = &model {
            errors.extend(m.violations());
        }
        let domain_spec = domain.as_ref().and_then(|d| {
            let found = DomainSpec::check(d.mode, &d.lengths, &d.resolution);
            if found.is_empty() {
                DomainSpec::new(d.mode, &d.lengths, &d.resolution).ok()
            } else {
                errors.extend(found);
                None
            }
        });
        let sim = match (&params, domain_spec) {
            (Some(p), Some(d)) => {
                let mut sim = SimParams::new(p.alpha, p.tau, p.rho, p.t_final, d);
                sim.em_weight = p.em_weight;
                sim.cfl_safety = p.cfl_safety;
                sim.phi_gradient = p.phi_gradient;
                sim.dt_max = p.dt_max;
                errors.extend(sim.violations());
                Some(sim)
            }
            (Some(p), None) => {
                // Still report parameter problems without a usable domain.
                let d = DomainSpec::new(BoundaryMode::Periodic, &[1.0], &[8]).expect("fixed domain");
                let mut sim = SimParams::new(p.alpha, p.tau, p.rho, p.t_final, d);
                sim.em_weight = p.em_weight;
                sim.cfl_safety = p.cfl_safety;
                sim.phi_gradient = p.phi_gradient;
                sim.dt_max = p.dt_max;
                errors.extend(sim.violations());
                None
            }
            _ => None,
        };
        if let (Some(init), Some(sim)) = (&initial, &sim) {
            errors.extend(initial_violations(init, &sim.domain));
        }
        if let Some(sim) = &sim {
            errors.extend(output_violations(&output, sim.t_final));
        }
        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }
        Ok(Config {
            params_section: params.expect("validated"),
            domain_section: domain.expect("validated"),
            model: model.expect("validated"),
            initial: initial.expect("validated"),
            output,
            params: sim.expect("validated"),
            base_dir: base_dir.to_path_buf(),
        })
    }

    pub fn diagnostics_times(&self) -> Vec<f64> {
        self.output
            .diagnostics_times
            .clone()
            .unwrap_or_else(|| even_samples(self.params.t_final))
    }

    pub fn snapshot_times(&self) -> Vec<f64> {
        self.output
            .snapshot_times
            .clone()
            .unwrap_or_else(|| even_samples(self.params.t_final))
    }

    pub fn output_dir(&self) -> PathBuf {
        self.resolve(&self.output.dir)
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    fn load_snapshot(&self, path: &Path) -> Result<ScalarField> {
        let (meta, field) = read_snapshot(&self.resolve(path))?;
        let d = self.params.domain;
        if meta.resolution != d.resolution[..d.dim] {
            return Err(Error::Shape(format!(
                "snapshot {} has resolution {:?}, domain has {:?}",
                path.display(),
                meta.resolution,
                &d.resolution[..d.dim]
            )));
        }
        ScalarField::from_values(d, field.into_values())
    }

    /// Initial fields before mollification.
    pub fn initial_fields(&self) -> Result<(ScalarField, ScalarField, VectorField)> {
        let d = self.params.domain;
        let mut rng = ChaCha8Rng::seed_from_u64(self.initial.seed);
        let n = match &self.initial.n {
            DensityInit::Constant { value } => ScalarField::constant(d, *value),
            DensityInit::Snapshot { path } => self.load_snapshot(path)?,
            DensityInit::GaussianBumps {
                bumps,
                background,
                perturbation,
            } => {
                let mut total = ScalarField::constant(d, *background);
                for b in bumps {
                    let shape = ScalarField::from_fn(d, |x| {
                        let r2: f64 = (0..d.dim).map(|a| (x[a] - b.center[a]).powi(2)).sum();
                        (-r2 / (b.width * b.width)).exp()
                    });
                    let scale = b.mass / integrate(&shape);
                    total = total.zip_map(&shape, |t, s| t + scale * s);
                }
                let noise: Vec<f64> = (0..d.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let vals = total
                    .values()
                    .iter()
                    .zip(noise)
                    .map(|(v, z)| v * (1.0 + perturbation * z))
                    .collect();
                ScalarField::from_values(d, vals)?
            }
        };
        let c = match &self.initial.c {
            OxygenInit::Constant { value } => ScalarField::constant(d, *value),
            OxygenInit::Snapshot { path } => self.load_snapshot(path)?,
            OxygenInit::Cosine {
                mean,
                amplitude,
                wavenumbers,
            } => ScalarField::from_fn(d, |x| {
                let prod: f64 = (0..d.dim)
                    .map(|a| (2.0 * std::f64::consts::PI * wavenumbers[a] as f64 * x[a] / d.lengths[a]).cos())
                    .product();
                mean + amplitude * prod
            }),
        };
        let u = match &self.initial.u {
            VelocityInit::Zero => VectorField::zeros(d),
            VelocityInit::Snapshot { paths } => {
                let comps = paths.iter().map(|p| self.load_snapshot(p)).collect::<Result<Vec<_>>>()?;
                project(&VectorField::from_components(comps)?)?.u
            }
            VelocityInit::Vortex { amplitude, width } => {
                let raw = VectorField::from_fn(d, |x| {
                    let e = amplitude * (-(x[0] * x[0] + x[1] * x[1]) / (width * width)).exp();
                    [-x[1] * e, x[0] * e, 0.0]
                });
                project(&raw)?.u
            }
        };
        Ok((n, c, u))
    }
}

fn initial_violations(init: &InitialSection, d: &DomainSpec) -> Vec<String> {
    let mut errors = Vec::new();
    match &init.n {
        DensityInit::GaussianBumps {
            bumps,
            background,
            perturbation,
        } => {
            if bumps.is_empty() {
                errors.push("initial.n.bumps: at least one bump required".into());
            }
            for (i, b) in bumps.iter().enumerate() {
                if b.center.len() != d.dim {
                    errors.push(format!("initial.n.bumps[{i}].center: expected {} coordinates", d.dim));
                }
                if !(b.width > 0.0) {
                    errors.push(format!("initial.n.bumps[{i}].width: must be > 0 (got {})", b.width));
                }
                if !(b.mass > 0.0) {
                    errors.push(format!("initial.n.bumps[{i}].mass: must be > 0 (got {})", b.mass));
                }
            }
            if !(*background >= 0.0) {
                errors.push(format!("initial.n.background: must be >= 0 (got {background})"));
            }
            if !(0.0..1.0).contains(perturbation) {
                errors.push(format!("initial.n.perturbation: must lie in [0, 1) (got {perturbation})"));
            }
        }
        DensityInit::Constant { value } => {
            if !(*value >= 0.0 && value.is_finite()) {
                errors.push(format!("initial.n.value: must be >= 0 (got {value})"));
            }
        }
        DensityInit::Snapshot { .. } => {}
    }
    match &init.c {
        OxygenInit::Constant { value } => {
            if !(*value >= 0.0 && value.is_finite()) {
                errors.push(format!("initial.c.value: must be >= 0 (got {value})"));
            }
        }
        OxygenInit::Cosine {
            mean,
            amplitude,
            wavenumbers,
        } => {
            if wavenumbers.len() != d.dim {
                errors.push(format!("initial.c.wavenumbers: expected {} entries", d.dim));
            }
            if !(mean - amplitude.abs() >= 0.0) {
                errors.push("initial.c: mean - |amplitude| must be >= 0 so that c >= 0".into());
            }
        }
        OxygenInit::Snapshot { .. } => {}
    }
    match &init.u {
        VelocityInit::Vortex { width, amplitude } => {
            if d.dim < 2 {
                errors.push("initial.u: a vortex needs dim >= 2".into());
            }
            if !(*width > 0.0) {
                errors.push(format!("initial.u.width: must be > 0 (got {width})"));
            }
            if !amplitude.is_finite() {
                errors.push("initial.u.amplitude: must be finite".into());
            }
        }
        VelocityInit::Snapshot { paths } => {
            if paths.len() != d.dim {
                errors.push(format!("initial.u.paths: expected {} component files", d.dim));
            }
        }
        VelocityInit::Zero => {}
    }
    errors
}

fn output_violations(out: &OutputSection, t_final: f64) -> Vec<String> {
    let mut errors = Vec::new();
    for (key, times) in [("diagnostics_times", &out.diagnostics_times), ("snapshot_times", &out.snapshot_times)] {
        if let Some(ts) = times {
            if ts.iter().any(|t| !(0.0..=t_final).contains(t)) {
                errors.push(format!("output.{key}: times must lie in [0, t_final]"));
            }
            if ts.windows(2).any(|w| w[1] <= w[0]) {
                errors.push(format!("output.{key}: times must be strictly increasing"));
            }
        }
    }
    for f in &out.snapshot_fields {
        if !["n", "c", "u", "p"].contains(&f.as_str()) {
            errors.push(format!("output.snapshot_fields: unknown field {f:?} (expected n, c, u or p)"));
        }
    }
    for (key, v) in [("energy_ceiling_factor", out.energy_ceiling_factor), ("bounded_multiple", out.bounded_multiple)] {
        if let Some(v) = v {
            if !(v > 0.0) {
                errors.push(format!("output.{key}: must be > 0 (got {v})"));
            }
        }
    }
    errors
}
