//! Implicit solves for the bounded (neumann / no-slip) box, by conjugate
//! gradients on the same stencils the explicit operators use.

use crate::error::Result;
use crate::grid::{divergence, gradient, laplacian, laplacian_compact, Ghost, ScalarField, VectorField};
use crate::linsolve::{conjugate_gradient, dot};

fn cg_limit(len: usize) -> usize {
    20 * len + 1000
}

/// Solve `(I - coeff · laplacian_compact) x = b` with the given ghost rule.
pub fn solve_helmholtz(b: &ScalarField, coeff: f64, ghost: Ghost) -> Result<ScalarField> {
    let domain = *b.domain();
    let apply = |x: &[f64]| {
        let f = ScalarField::from_values(domain, x.to_vec()).expect("domain-sized");
        let lap = laplacian_compact(&f, ghost);
        x.iter().zip(lap.values()).map(|(xi, li)| xi - coeff * li).collect()
    };
    let norm = dot(b.values(), b.values()).sqrt();
    let out = conjugate_gradient(apply, b.values(), Some(b.values()), 1e-14 * norm, cg_limit(b.len()))?;
    ScalarField::from_values(domain, out.x)
}

/// Split `v = u + gradient(p)` with `divergence(u) ≈ 0`, `mean(p) = 0`.
///
/// The pressure equation `laplacian(p) = divergence(v)` is singular with the
/// constants as its only null space under mirror ghosts; the right-hand side is
/// made exactly compatible by removing its mean.
pub fn project(v: &VectorField) -> Result<(VectorField, ScalarField)> {
    let domain = *v.domain();
    let div = divergence(v);
    let mean = div.mean();
    let rhs: Vec<f64> = div.values().iter().map(|d| mean - d).collect();
    let apply = |x: &[f64]| {
        let f = ScalarField::from_values(domain, x.to_vec()).expect("domain-sized");
        laplacian(&f).values().iter().map(|l| -l).collect()
    };
    let norm = dot(&rhs, &rhs).sqrt();
    let out = conjugate_gradient(apply, &rhs, None, 1e-13 * norm, cg_limit(rhs.len()))?;
    let mut p = ScalarField::from_values(domain, out.x)?;
    let pm = p.mean();
    p.values_mut().iter_mut().for_each(|x| *x -= pm);
    let g = gradient(&p);
    Ok((v.sub(&g), p))
}
