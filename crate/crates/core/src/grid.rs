//! Cell-centered structured grids and the discrete operators used throughout
//! the solver and diagnostics.
//!
//! Storage is row-major over three axes (axis 0 slowest); inactive axes have a
//! single cell. Central operators are built so that `divergence` is the
//! negative adjoint of `gradient` under the cell-volume inner product, in both
//! boundary modes:
//!
//! * periodic: wraparound neighbours;
//! * neumann: scalar ghosts mirror the boundary cell (zero normal derivative),
//!   vector ghosts are odd reflections (the field vanishes on the wall).

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundaryMode, DomainSpec};

/// How a neighbour outside a neumann box is synthesized.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ghost {
    /// Mirror the boundary cell: zero normal derivative on the wall.
    Even,
    /// Negate the boundary cell: zero value on the wall.
    Odd,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    domain: DomainSpec,
    values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

#[inline]
pub(crate) fn strides(domain: &DomainSpec) -> [usize; 3] {
    let r = domain.resolution;
    [r[1] * r[2], r[2], 1]
}

#[inline]
pub(crate) fn coords(domain: &DomainSpec, idx: usize) -> [usize; 3] {
    let r = domain.resolution;
    [idx / (r[1] * r[2]), (idx / r[2]) % r[1], idx % r[2]]
}

/// Values of the minus and plus neighbours of `idx` along `axis`.
#[inline]
pub(crate) fn neighbours(
    values: &[f64],
    domain: &DomainSpec,
    idx: usize,
    coord: usize,
    axis: usize,
    ghost: Ghost,
) -> (f64, f64) {
    let n = domain.resolution[axis];
    let s = strides(domain)[axis];
    let here = values[idx];
    let wall = match ghost {
        Ghost::Even => here,
        Ghost::Odd => -here,
    };
    let periodic = domain.mode == BoundaryMode::Periodic;
    let minus = if coord > 0 {
        values[idx - s]
    } else if periodic {
        values[idx + (n - 1) * s]
    } else {
        wall
    };
    let plus = if coord + 1 < n {
        values[idx + s]
    } else if periodic {
        values[idx - (n - 1) * s]
    } else {
        wall
    };
    (minus, plus)
}

/// Apply a per-cell stencil along one axis, in parallel over axis-0 slabs.
pub(crate) fn axis_stencil<F>(
    values: &[f64],
    domain: &DomainSpec,
    axis: usize,
    ghost: Ghost,
    op: F,
) -> Vec<f64>
where
    F: Fn(f64, f64, f64) -> f64 + Sync,
{
    let slab = domain.resolution[1] * domain.resolution[2];
    let mut out = vec![0.0; values.len()];
    out.par_chunks_mut(slab).enumerate().for_each(|(i0, chunk)| {
        for (j, slot) in chunk.iter_mut().enumerate() {
            let idx = i0 * slab + j;
            let c = coords(domain, idx)[axis];
            let (m, p) = neighbours(values, domain, idx, c, axis, ghost);
            *slot = op(values[idx], m, p);
        }
    });
    out
}

impl ScalarField {
    pub fn zeros(domain: DomainSpec) -> Self {
        Self::constant(domain, 0.0)
    }

    pub fn constant(domain: DomainSpec, value: f64) -> Self {
        ScalarField {
            domain,
            values: vec![value; domain.len()],
        }
    }

    pub fn from_values(domain: DomainSpec, values: Vec<f64>) -> Result<Self> {
        if values.len() != domain.len() {
            return Err(Error::Shape(format!(
                "expected {} values, got {}",
                domain.len(),
                values.len()
            )));
        }
        Ok(ScalarField { domain, values })
    }

    /// Sample `f` at cell centers.
    pub fn from_fn<F>(domain: DomainSpec, f: F) -> Self
    where
        F: Fn([f64; 3]) -> f64 + Sync,
    {
        let values = (0..domain.len())
            .into_par_iter()
            .map(|idx| f(cell_center(&domain, idx)))
            .collect();
        ScalarField { domain, values }
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map<F: Fn(f64) -> f64 + Sync>(&self, f: F) -> Self {
        ScalarField {
            domain: self.domain,
            values: self.values.par_iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map<F: Fn(f64, f64) -> f64 + Sync>(&self, other: &Self, f: F) -> Self {
        debug_assert_eq!(self.domain, other.domain);
        ScalarField {
            domain: self.domain,
            values: self
                .values
                .par_iter()
                .zip(other.values.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Arithmetic mean over cells (equal to the volume average on a uniform grid).
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

impl VectorField {
    pub fn zeros(domain: DomainSpec) -> Self {
        VectorField {
            components: (0..domain.dim).map(|_| ScalarField::zeros(domain)).collect(),
        }
    }

    pub fn from_components(components: Vec<ScalarField>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::Shape("vector field needs at least one component".into()));
        };
        let domain = *first.domain();
        if components.len() != domain.dim {
            return Err(Error::Shape(format!(
                "expected {} components, got {}",
                domain.dim,
                components.len()
            )));
        }
        if components.iter().any(|c| *c.domain() != domain) {
            return Err(Error::Shape("components live on different domains".into()));
        }
        Ok(VectorField { components })
    }

    pub fn from_fn<F>(domain: DomainSpec, f: F) -> Self
    where
        F: Fn([f64; 3]) -> [f64; 3] + Sync,
    {
        let components = (0..domain.dim)
            .map(|a| ScalarField::from_fn(domain, |x| f(x)[a]))
            .collect();
        VectorField { components }
    }

    pub fn domain(&self) -> &DomainSpec {
        self.components[0].domain()
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [ScalarField] {
        &mut self.components
    }

    pub fn component(&self, axis: usize) -> &ScalarField {
        &self.components[axis]
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(ScalarField::is_finite)
    }

    /// Largest pointwise Euclidean norm.
    pub fn max_norm(&self) -> f64 {
        let n = self.components[0].len();
        (0..n)
            .map(|i| {
                self.components
                    .iter()
                    .map(|c| c.values()[i] * c.values()[i])
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Pointwise squared norm as a scalar field.
    pub fn norm_squared(&self) -> ScalarField {
        let mut out = ScalarField::zeros(*self.domain());
        for c in &self.components {
            for (o, v) in out.values.iter_mut().zip(c.values()) {
                *o += v * v;
            }
        }
        out
    }

    pub fn scale(&self, factor: f64) -> Self {
        VectorField {
            components: self.components.iter().map(|c| c.map(|v| v * factor)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        VectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.zip_map(b, |x, y| x - y))
                .collect(),
        }
    }
}

/// Cell-center coordinates in the origin-centered box.
#[inline]
pub fn cell_center(domain: &DomainSpec, idx: usize) -> [f64; 3] {
    let c = coords(domain, idx);
    let mut x = [0.0; 3];
    for a in 0..domain.dim {
        let h = domain.cell_size(a);
        x[a] = -0.5 * domain.lengths[a] + (c[a] as f64 + 0.5) * h;
    }
    x
}

/// Central-difference derivative along one axis.
pub fn partial(f: &ScalarField, axis: usize, ghost: Ghost) -> ScalarField {
    let domain = *f.domain();
    let inv = 0.5 / domain.cell_size(axis);
    ScalarField {
        domain,
        values: axis_stencil(&f.values, &domain, axis, ghost, |_, m, p| (p - m) * inv),
    }
}

/// Central-difference gradient of a scalar (mirror ghosts in neumann mode).
pub fn gradient(f: &ScalarField) -> VectorField {
    gradient_with(f, Ghost::Even)
}

pub fn gradient_with(f: &ScalarField, ghost: Ghost) -> VectorField {
    let dim = f.domain().dim;
    VectorField {
        components: (0..dim).map(|a| partial(f, a, ghost)).collect(),
    }
}

/// Central-difference divergence, the negative adjoint of [`gradient`].
pub fn divergence(v: &VectorField) -> ScalarField {
    let domain = *v.domain();
    let mut out = ScalarField::zeros(domain);
    for (axis, comp) in v.components.iter().enumerate() {
        let d = partial(comp, axis, Ghost::Odd);
        out.values
            .par_iter_mut()
            .zip(d.values.par_iter())
            .for_each(|(o, x)| *o += x);
    }
    out
}

/// `divergence(gradient(f))`: the 2·dim+1-point stencil with stride two.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    divergence(&gradient(f))
}

/// Compact `(f[i+1] - 2 f[i] + f[i-1]) / h^2` Laplacian, the face-flux form
/// used by the diffusion updates.
pub fn laplacian_compact(f: &ScalarField, ghost: Ghost) -> ScalarField {
    let domain = *f.domain();
    let mut out = ScalarField::zeros(domain);
    for axis in 0..domain.dim {
        let h = domain.cell_size(axis);
        let inv = 1.0 / (h * h);
        let d = axis_stencil(&f.values, &domain, axis, ghost, |c, m, p| (p - 2.0 * c + m) * inv);
        out.values
            .par_iter_mut()
            .zip(d.par_iter())
            .for_each(|(o, x)| *o += x);
    }
    out
}

/// Midpoint quadrature `∑ f dV`.
pub fn integrate(f: &ScalarField) -> f64 {
    f.values.iter().sum::<f64>() * f.domain.cell_volume()
}

/// `(∫|f|^p)^(1/p)`, or `max|f|` for `p = ∞`.
pub fn lp_norm(f: &ScalarField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::invalid("p", format!("Lp norm needs p >= 1 (got {p})")));
    }
    if p.is_infinite() {
        return Ok(f.max_abs());
    }
    let dv = f.domain.cell_volume();
    let sum: f64 = if p == 1.0 {
        f.values.iter().map(|v| v.abs()).sum()
    } else if p == 2.0 {
        f.values.iter().map(|v| v * v).sum()
    } else {
        f.values.iter().map(|v| v.abs().powf(p)).sum()
    };
    Ok((sum * dv).powf(1.0 / p))
}

/// `∫ f g dV`.
pub fn inner(f: &ScalarField, g: &ScalarField) -> f64 {
    f.values.iter().zip(&g.values).map(|(a, b)| a * b).sum::<f64>() * f.domain.cell_volume()
}

/// `∫ u·v dV` for vector fields.
pub fn inner_vec(u: &VectorField, v: &VectorField) -> f64 {
    u.components
        .iter()
        .zip(&v.components)
        .map(|(a, b)| inner(a, b))
        .sum()
}

/// Sidecar metadata written next to every raw snapshot.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotMeta {
    pub field: String,
    pub time: f64,
    pub dim: usize,
    pub resolution: Vec<usize>,
    pub lengths: Vec<f64>,
    pub mode: BoundaryMode,
}

/// Write `<dir>/<stem>.bin` (little-endian f64, row-major) and `<dir>/<stem>.json`.
pub fn write_snapshot(
    dir: &Path,
    stem: &str,
    field_name: &str,
    time: f64,
    field: &ScalarField,
) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let d = field.domain();
    let mut bytes = Vec::with_capacity(field.len() * 8);
    for v in field.values() {
        bytes.extend_from_slice(&v.to_le_bytes());
    }
    let bin = dir.join(format!("{stem}.bin"));
    fs::write(&bin, bytes)?;
    let meta = SnapshotMeta {
        field: field_name.to_string(),
        time,
        dim: d.dim,
        resolution: d.resolution[..d.dim].to_vec(),
        lengths: d.lengths[..d.dim].to_vec(),
        mode: d.mode,
    };
    fs::write(dir.join(format!("{stem}.json")), serde_json::to_string_pretty(&meta)?)?;
    Ok(bin)
}

/// Read a snapshot given the path of its `.bin` file (the sidecar shares the stem).
pub fn read_snapshot(bin: &Path) -> Result<(SnapshotMeta, ScalarField)> {
    let meta: SnapshotMeta = serde_json::from_str(&fs::read_to_string(bin.with_extension("json"))?)?;
    let domain = DomainSpec::new(meta.mode, &meta.lengths, &meta.resolution)?;
    let bytes = fs::read(bin)?;
    if bytes.len() != domain.len() * 8 {
        return Err(Error::Shape(format!(
            "{}: expected {} bytes, found {}",
            bin.display(),
            domain.len() * 8,
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(8)
        .map(|b| f64::from_le_bytes(b.try_into().expect("chunk of 8")))
        .collect();
    Ok((meta, ScalarField::from_values(domain, values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn periodic(lengths: &[f64], res: &[usize]) -> DomainSpec {
        DomainSpec::new(BoundaryMode::Periodic, lengths, res).unwrap()
    }

    fn neumann(lengths: &[f64], res: &[usize]) -> DomainSpec {
        DomainSpec::new(BoundaryMode::Neumann, lengths, res).unwrap()
    }

    fn max_err(a: &ScalarField, b: &ScalarField) -> f64 {
        a.zip_map(b, |x, y| x - y).max_abs()
    }

    #[test]
    fn constant_field_has_zero_gradient() {
        for d in [periodic(&[1.0, 2.0, 1.5], &[8, 10, 12]), neumann(&[1.0, 1.0], &[8, 9])] {
            let g = gradient(&ScalarField::constant(d, 3.7));
            assert!(g.components().iter().all(|c| c.max_abs() == 0.0));
        }
    }

    #[test]
    fn gradient_of_sine_is_second_order() {
        let l = 2.0;
        let k = 2.0 * PI / l;
        let err = |n: usize| {
            let d = periodic(&[l], &[n]);
            let f = ScalarField::from_fn(d, |x| (k * x[0]).sin());
            let exact = ScalarField::from_fn(d, |x| k * (k * x[0]).cos());
            max_err(gradient(&f).component(0), &exact)
        };
        let (e1, e2) = (err(32), err(64));
        assert!(e1 < 0.05);
        assert!((e1 / e2).log2() >= 1.9, "order {}", (e1 / e2).log2());
    }

    #[test]
    fn laplacian_of_cosine_is_second_order() {
        let l = 1.0;
        let k = 2.0 * PI / l;
        let err = |n: usize, compact: bool| {
            let d = periodic(&[l, l], &[n, n]);
            let f = ScalarField::from_fn(d, |x| (k * x[0]).cos());
            let exact = f.map(|v| -k * k * v);
            let lap = if compact {
                laplacian_compact(&f, Ghost::Even)
            } else {
                laplacian(&f)
            };
            max_err(&lap, &exact)
        };
        for compact in [false, true] {
            let (e1, e2) = (err(32, compact), err(64, compact));
            assert!((e1 / e2).log2() >= 1.9);
        }
    }

    #[test]
    fn neumann_wall_face_gradient_vanishes_for_symmetric_field() {
        // f even about the wall at x = -L/2: the mirror ghost equals the
        // boundary cell, so the one-sided wall difference is exactly zero.
        let d = neumann(&[1.0, 1.0], &[16, 8]);
        let f = ScalarField::from_fn(d, |x| (PI * (x[0] + 0.5)).cos());
        let vals = f.values();
        let (minus, _) = neighbours(vals, &d, 0, 0, 0, Ghost::Even);
        assert_eq!(minus - vals[0], 0.0);
        // and the divergence of a field that is odd about both walls is the
        // plain central difference there.
        let v = VectorField::from_fn(d, |x| [(PI * (x[0] + 0.5)).sin(), 0.0, 0.0]);
        assert!(divergence(&v).is_finite());
    }

    #[test]
    fn divergence_of_constant_vector_is_zero() {
        let d = periodic(&[1.0, 1.0, 1.0], &[8, 8, 8]);
        let v = VectorField::from_fn(d, |_| [1.0, -2.0, 0.5]);
        assert_eq!(divergence(&v).max_abs(), 0.0);
    }

    #[test]
    fn integrals_and_norms_of_constants() {
        let d = periodic(&[2.0, 3.0], &[8, 12]);
        let one = ScalarField::constant(d, 1.0);
        assert!((integrate(&one) - 6.0).abs() < 1e-12);
        let a = ScalarField::constant(d, -1.5);
        for p in [1.0, 1.5, 2.0, 3.7] {
            let expect = 1.5 * 6f64.powf(1.0 / p);
            assert!((lp_norm(&a, p).unwrap() - expect).abs() < 1e-12 * expect);
        }
        assert_eq!(lp_norm(&a, f64::INFINITY).unwrap(), 1.5);
        assert!(lp_norm(&a, 0.5).is_err());
    }

    fn random_field(d: DomainSpec, seed: &[f64]) -> ScalarField {
        let vals = (0..d.len()).map(|i| seed[i % seed.len()] * ((i * 7919) % 13) as f64).collect();
        ScalarField::from_values(d, vals).unwrap()
    }

    #[test]
    fn laplacian_is_divergence_of_gradient_in_neumann_mode() {
        let d = neumann(&[1.0, 2.0], &[9, 11]);
        let f = random_field(d, &[0.3, -1.2, 2.5, 0.7]);
        let lap = laplacian(&f);
        let composed = divergence(&gradient(&f));
        assert!(max_err(&lap, &composed) <= 1e-12 * composed.max_abs());
    }

    #[test]
    fn neumann_divergence_is_adjoint_and_mean_free() {
        let d = neumann(&[1.0, 1.5, 0.7], &[8, 9, 10]);
        let f = random_field(d, &[1.0, 0.2, -0.4]);
        let v = VectorField::from_components(vec![
            random_field(d, &[0.5, -0.1]),
            random_field(d, &[-0.3, 0.9, 0.2]),
            random_field(d, &[1.1]),
        ])
        .unwrap();
        let lhs = inner(&f, &divergence(&v));
        let rhs = -inner_vec(&gradient(&f), &v);
        assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
        assert!(integrate(&divergence(&v)).abs() < 1e-12);
    }

    #[test]
    fn snapshot_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let d = periodic(&[1.0, 2.0], &[8, 16]);
        let f = ScalarField::from_fn(d, |x| x[0] * 3.0 - x[1]);
        let bin = write_snapshot(dir.path(), "snap_n", "n", 0.25, &f).unwrap();
        let (meta, g) = read_snapshot(&bin).unwrap();
        assert_eq!(meta.field, "n");
        assert_eq!(meta.time, 0.25);
        assert_eq!(meta.resolution, vec![8, 16]);
        assert_eq!(f, g);
        // byte layout: little-endian, row-major, axis 0 slowest
        let raw = std::fs::read(&bin).unwrap();
        assert_eq!(raw.len(), 8 * 128);
        let second = f64::from_le_bytes(raw[8..16].try_into().unwrap());
        assert_eq!(second, f.values()[1]);
        assert_eq!(coords(&d, 1), [0, 1, 0]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn periodic_divergence_integrates_to_zero(
            vals in prop::collection::vec(-10.0f64..10.0, 8 * 9 * 10 * 3)
        ) {
            let d = periodic(&[1.0, 1.3, 0.8], &[8, 9, 10]);
            let n = d.len();
            let comps = (0..3)
                .map(|a| ScalarField::from_values(d, vals[a * n..(a + 1) * n].to_vec()).unwrap())
                .collect();
            let v = VectorField::from_components(comps).unwrap();
            let norm = v.components().iter().map(|c| c.max_abs()).fold(0.0, f64::max);
            prop_assert!(integrate(&divergence(&v)).abs() <= 1e-12 * norm.max(1.0));
        }

        #[test]
        fn periodic_integration_by_parts_and_compatibility(
            vals in prop::collection::vec(-5.0f64..5.0, 12 * 10 * 3)
        ) {
            let d = periodic(&[1.0, 2.0], &[12, 10]);
            let n = d.len();
            let f = ScalarField::from_values(d, vals[..n].to_vec()).unwrap();
            let v = VectorField::from_components(vec![
                ScalarField::from_values(d, vals[n..2 * n].to_vec()).unwrap(),
                ScalarField::from_values(d, vals[2 * n..].to_vec()).unwrap(),
            ]).unwrap();
            let lhs = inner(&f, &divergence(&v));
            let rhs = -inner_vec(&gradient(&f), &v);
            let scale = f.max_abs() * v.max_norm() * d.volume() / d.cell_size(0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));

            let lap = laplacian(&f);
            let composed = divergence(&gradient(&f));
            prop_assert!(max_err(&lap, &composed) <= 1e-12 * composed.max_abs().max(1.0));
        }
    }
}
