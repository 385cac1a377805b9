//! Fourier diagonalization of the periodic discrete operators.
//!
//! Every periodic operator in the crate is a Fourier multiplier. Along axis
//! `a` with wavenumber `k` and spacing `h`:
//!
//! * central difference: `i·sin(k h)/h`
//! * compact second difference: `-(2 - 2 cos(k h))/h²`
//!
//! so implicit diffusion and the discrete Leray projection are exact
//! (to round-off) divisions in Fourier space.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{strides, ScalarField, VectorField};
use crate::model::{BoundaryMode, DomainSpec};

/// Cached FFT plans for one periodic domain.
pub struct Spectral {
    domain: DomainSpec,
    forward: Vec<Arc<dyn Fft<f64>>>,
    inverse: Vec<Arc<dyn Fft<f64>>>,
    /// `sin(k h)/h` per axis and index.
    central: Vec<Vec<f64>>,
    /// `(2 - 2 cos(k h))/h²` per axis and index (nonnegative).
    compact: Vec<Vec<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("domain", &self.domain).finish()
    }
}

/// Projection output: divergence-free part and zero-mean potential.
#[derive(Clone, Debug)]
pub struct Projection {
    pub u: VectorField,
    pub p: ScalarField,
}

impl Spectral {
    pub fn new(domain: DomainSpec) -> Result<Self> {
        if domain.mode != BoundaryMode::Periodic {
            return Err(Error::UnsupportedMode {
                mode: domain.mode.name(),
                what: "spectral operators".into(),
            });
        }
        let mut planner = FftPlanner::new();
        let mut forward = Vec::new();
        let mut inverse = Vec::new();
        let mut central = Vec::new();
        let mut compact = Vec::new();
        for axis in 0..3 {
            let n = domain.resolution[axis];
            forward.push(planner.plan_fft_forward(n));
            inverse.push(planner.plan_fft_inverse(n));
            if axis < domain.dim {
                let h = domain.cell_size(axis);
                let ks: Vec<f64> = (0..n).map(|i| wavenumber(i, n, domain.lengths[axis])).collect();
                // sin(π) is not exactly zero in floating point; the Nyquist
                // symbol must be, or the projection divides by round-off.
                central.push(
                    ks.iter()
                        .enumerate()
                        .map(|(i, k)| if 2 * i == n { 0.0 } else { (k * h).sin() / h })
                        .collect(),
                );
                compact.push(ks.iter().map(|k| (2.0 - 2.0 * (k * h).cos()) / (h * h)).collect());
            } else {
                central.push(vec![0.0; n]);
                compact.push(vec![0.0; n]);
            }
        }
        Ok(Spectral {
            domain,
            forward,
            inverse,
            central,
            compact,
        })
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    fn transform(&self, data: &mut [Complex64], plans: &[Arc<dyn Fft<f64>>]) {
        for (axis, plan) in plans.iter().enumerate().take(self.domain.dim) {
            let n = self.domain.resolution[axis];
            let s = strides(&self.domain)[axis];
            if s == 1 {
                data.par_chunks_mut(n).for_each(|line| plan.process(line));
                continue;
            }
            // Lines along a strided axis: gather, transform, scatter.
            let r = self.domain.resolution;
            let starts: Vec<usize> = (0..data.len())
                .filter(|&idx| {
                    let c = [idx / (r[1] * r[2]), (idx / r[2]) % r[1], idx % r[2]];
                    c[axis] == 0
                })
                .collect();
            let lines: Vec<Vec<Complex64>> = starts
                .par_iter()
                .map(|&start| {
                    let mut line: Vec<Complex64> = (0..n).map(|i| data[start + i * s]).collect();
                    plan.process(&mut line);
                    line
                })
                .collect();
            for (start, line) in starts.iter().zip(lines) {
                for (i, v) in line.into_iter().enumerate() {
                    data[start + i * s] = v;
                }
            }
        }
    }

    pub fn forward(&self, f: &ScalarField) -> Vec<Complex64> {
        let mut data: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.transform(&mut data, &self.forward);
        data
    }

    /// Inverse transform, normalized, keeping the real part.
    pub fn inverse(&self, mut data: Vec<Complex64>) -> ScalarField {
        self.transform(&mut data, &self.inverse);
        let scale = 1.0 / data.len() as f64;
        let values = data.into_iter().map(|z| z.re * scale).collect();
        ScalarField::from_values(self.domain, values).expect("domain-sized buffer")
    }

    fn mode(&self, idx: usize) -> [usize; 3] {
        let r = self.domain.resolution;
        [idx / (r[1] * r[2]), (idx / r[2]) % r[1], idx % r[2]]
    }

    /// Symbol of the central-difference gradient, divided by `i`.
    fn central_symbol(&self, idx: usize) -> [f64; 3] {
        let m = self.mode(idx);
        [self.central[0][m[0]], self.central[1][m[1]], self.central[2][m[2]]]
    }

    /// Eigenvalue of `-laplacian_compact` at a mode.
    fn compact_symbol(&self, idx: usize) -> f64 {
        let m = self.mode(idx);
        self.compact[0][m[0]] + self.compact[1][m[1]] + self.compact[2][m[2]]
    }

    /// Solve `(I - coeff · laplacian_compact) x = f`.
    pub fn solve_helmholtz(&self, f: &ScalarField, coeff: f64) -> ScalarField {
        let mut hat = self.forward(f);
        hat.par_iter_mut().enumerate().for_each(|(idx, z)| {
            *z /= 1.0 + coeff * self.compact_symbol(idx);
        });
        self.inverse(hat)
    }

    /// Discrete Leray projection with respect to the central `divergence`.
    pub fn project(&self, v: &VectorField) -> Projection {
        self.diffuse_and_project(v, 0.0)
    }

    /// `project((I - coeff · laplacian_compact)^{-1} v)`; both factors are
    /// Fourier multipliers, so they commute.
    pub fn diffuse_and_project(&self, v: &VectorField, coeff: f64) -> Projection {
        let dim = self.domain.dim;
        let mut hats: Vec<Vec<Complex64>> = v.components().iter().map(|c| self.forward(c)).collect();
        let len = hats[0].len();
        let mut p_hat = vec![Complex64::new(0.0, 0.0); len];
        for idx in 0..len {
            let damp = 1.0 / (1.0 + coeff * self.compact_symbol(idx));
            let s = self.central_symbol(idx);
            let mut s_dot_v = Complex64::new(0.0, 0.0);
            let mut s2 = 0.0;
            for a in 0..dim {
                hats[a][idx] *= damp;
                s_dot_v += hats[a][idx] * s[a];
                s2 += s[a] * s[a];
            }
            // Modes with s = 0 (the mean and Nyquist modes) are divergence-free.
            if s2 > 0.0 {
                for a in 0..dim {
                    hats[a][idx] -= s_dot_v * (s[a] / s2);
                }
                p_hat[idx] = Complex64::new(0.0, -1.0) * s_dot_v / s2;
            }
        }
        let comps = hats.into_iter().map(|h| self.inverse(h)).collect();
        Projection {
            u: VectorField::from_components(comps).expect("same domain"),
            p: self.inverse(p_hat),
        }
    }
}

/// Signed angular wavenumber of FFT index `i` on a periodic axis of length `l`.
pub fn wavenumber(i: usize, n: usize, l: f64) -> f64 {
    let signed = if i <= n / 2 { i as f64 } else { i as f64 - n as f64 };
    2.0 * PI * signed / l
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{divergence, gradient, integrate, laplacian_compact, Ghost};

    fn dom(res: &[usize]) -> DomainSpec {
        let l: Vec<f64> = res.iter().map(|_| 1.0).collect();
        DomainSpec::new(BoundaryMode::Periodic, &l, res).unwrap()
    }

    fn rough(d: DomainSpec, seed: u64) -> ScalarField {
        let mut state = seed;
        let vals = (0..d.len())
            .map(|_| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            })
            .collect();
        ScalarField::from_values(d, vals).unwrap()
    }

    #[test]
    fn round_trip_is_identity() {
        let d = dom(&[8, 10, 12]);
        let s = Spectral::new(d).unwrap();
        let f = rough(d, 3);
        let g = s.inverse(s.forward(&f));
        assert!(f.zip_map(&g, |a, b| a - b).max_abs() < 1e-14);
    }

    #[test]
    fn helmholtz_inverts_compact_operator() {
        let d = dom(&[16, 8]);
        let s = Spectral::new(d).unwrap();
        let f = rough(d, 11);
        let x = s.solve_helmholtz(&f, 0.3);
        let lap = laplacian_compact(&x, Ghost::Even);
        let back = x.zip_map(&lap, |a, l| a - 0.3 * l);
        assert!(back.zip_map(&f, |a, b| a - b).max_abs() < 1e-12);
    }

    #[test]
    fn projection_of_random_field_is_divergence_free() {
        let d = dom(&[12, 16, 8]);
        let s = Spectral::new(d).unwrap();
        let v = VectorField::from_components(vec![rough(d, 1), rough(d, 2), rough(d, 5)]).unwrap();
        let pr = s.project(&v);
        assert!(divergence(&pr.u).max_abs() < 1e-12);
        assert!(integrate(&pr.p).abs() < 1e-12);
        // v = u + grad p
        let recon = pr.u.components()[0].zip_map(gradient(&pr.p).component(0), |a, b| a + b);
        let e = recon.zip_map(v.component(0), |a, b| a - b).max_abs(); assert!(e < 1e-12, "{e}");
    }

    #[test]
    fn rejects_neumann_domain() {
        let d = DomainSpec::new(BoundaryMode::Neumann, &[1.0, 1.0], &[8, 8]).unwrap();
        assert!(Spectral::new(d).is_err());
    }
}
