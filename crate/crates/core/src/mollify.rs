//! Discrete convolution with the compactly supported C^∞ bump kernel.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{coords, ScalarField, VectorField};
use crate::model::{BoundaryMode, DomainSpec};

/// `exp(-1/(1-r²))` for `r < 1`, zero otherwise.
pub fn bump(r: f64) -> f64 {
    if r < 1.0 {
        (-1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

/// Kernel weights on integer cell offsets, normalized to sum to one.
fn stencil(domain: &DomainSpec, rho: f64) -> Vec<([isize; 3], f64)> {
    let mut reach = [0isize; 3];
    for (a, r) in reach.iter_mut().enumerate().take(domain.dim) {
        *r = (rho / domain.cell_size(a)).floor() as isize;
    }
    let mut taps = Vec::new();
    for i in -reach[0]..=reach[0] {
        for j in -reach[1]..=reach[1] {
            for k in -reach[2]..=reach[2] {
                let off = [i, j, k];
                let r2: f64 = (0..domain.dim)
                    .map(|a| (off[a] as f64 * domain.cell_size(a) / rho).powi(2))
                    .sum();
                let w = bump(r2.sqrt());
                if w > 0.0 {
                    taps.push((off, w));
                }
            }
        }
    }
    let total: f64 = taps.iter().map(|t| t.1).sum();
    for t in &mut taps {
        t.1 /= total;
    }
    taps
}

/// `ψ_ρ ∗ f`.
///
/// Periodic mode wraps around; neumann mode renormalizes each output cell over
/// the taps that land inside the box. For `rho < 2 max h` the kernel is not
/// resolvable and the input is returned unchanged.
pub fn mollify(f: &ScalarField, rho: f64) -> Result<ScalarField> {
    if !(rho > 0.0 && rho < 1.0) {
        return Err(Error::invalid("rho", format!("mollifier radius must lie in (0, 1) (got {rho})")));
    }
    let domain = *f.domain();
    let h_max = (0..domain.dim).map(|a| domain.cell_size(a)).fold(0.0, f64::max);
    if rho < 2.0 * h_max {
        return Ok(f.clone());
    }
    let taps = stencil(&domain, rho);
    let res = domain.resolution;
    let periodic = domain.mode == BoundaryMode::Periodic;
    let vals = f.values();
    let out = (0..domain.len())
        .into_par_iter()
        .map(|idx| {
            let c = coords(&domain, idx);
            let mut acc = 0.0;
            let mut weight = 0.0;
            'tap: for (off, w) in &taps {
                let mut src = [0usize; 3];
                for a in 0..3 {
                    let n = res[a] as isize;
                    let mut s = c[a] as isize + off[a];
                    if periodic {
                        s = s.rem_euclid(n);
                    } else if s < 0 || s >= n {
                        continue 'tap;
                    }
                    src[a] = s as usize;
                }
                acc += w * vals[(src[0] * res[1] + src[1]) * res[2] + src[2]];
                weight += w;
            }
            acc / weight
        })
        .collect();
    ScalarField::from_values(domain, out)
}

/// Componentwise mollification.
pub fn mollify_vector(v: &VectorField, rho: f64) -> Result<VectorField> {
    let comps = v
        .components()
        .iter()
        .map(|c| mollify(c, rho))
        .collect::<Result<Vec<_>>>()?;
    VectorField::from_components(comps)
}
