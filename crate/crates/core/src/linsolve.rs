//! Matrix-free conjugate gradients for the symmetric positive (semi)definite
//! systems of neumann mode.

use crate::error::{Error, Result};

/// Outcome of a converged solve.
#[derive(Clone, Debug)]
pub struct CgOutcome {
    pub x: Vec<f64>,
    pub iterations: usize,
    /// Euclidean norm of the recurrence residual at exit.
    pub residual: f64,
}

/// Sequential dot product: reduction order is fixed, so results do not
/// depend on the worker count.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Solve `A x = b` for symmetric positive semidefinite `A`, stopping when
/// `‖r‖₂ <= tol`. For singular `A` the right-hand side must be consistent.
pub fn conjugate_gradient<F>(
    apply: F,
    b: &[f64],
    x0: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<CgOutcome>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut x = x0.map_or_else(|| vec![0.0; b.len()], <[f64]>::to_vec);
    let ax = apply(&x);
    let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut iterations = 0;
    while rr.sqrt() > tol {
        if iterations == max_iter {
            return Err(Error::NonConvergence {
                iterations,
                residual: rr.sqrt(),
            });
        }
        let ap = apply(&p);
        let pap = dot(&p, &ap);
        if !(pap > 0.0) {
            return Err(Error::NonConvergence {
                iterations,
                residual: rr.sqrt(),
            });
        }
        let step = rr / pap;
        for i in 0..x.len() {
            x[i] += step * p[i];
            r[i] -= step * ap[i];
        }
        let rr_new = dot(&r, &r);
        let beta = rr_new / rr;
        for i in 0..p.len() {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_new;
        iterations += 1;
    }
    Ok(CgOutcome {
        x,
        iterations,
        residual: rr.sqrt(),
    })
}
