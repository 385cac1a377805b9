//! Monitored functionals: mass, entropy, weighted moment, Lebesgue norms of
//! `n`, the energy `E_M`, the dissipation `D`, and the class checks run over a
//! whole time series.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{
    cell_center, divergence, gradient, gradient_with, inner, integrate, laplacian, lp_norm, Ghost,
    ScalarField,
};
use crate::model::{BoundaryMode, SimParams};
use crate::solver::{FieldState, NEGATIVITY_TOLERANCE};

/// Densities below this contribute nothing to the entropy (`0 log 0 = 0`).
pub const ENTROPY_FLOOR: f64 = 1e-300;

/// `‖n‖_p` at the exponents the estimates use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LpNorms {
    pub l1: f64,
    /// `p = 1 + α`
    pub l1pa: f64,
    pub l2: f64,
    /// `p = 1 + 2α`
    pub l1p2a: f64,
    pub linf: f64,
}

impl LpNorms {
    pub fn of(n: &ScalarField, alpha: f64) -> Result<Self> {
        Ok(LpNorms {
            l1: lp_norm(n, 1.0)?,
            l1pa: lp_norm(n, 1.0 + alpha)?,
            l2: lp_norm(n, 2.0)?,
            l1p2a: lp_norm(n, 1.0 + 2.0 * alpha)?,
            linf: lp_norm(n, f64::INFINITY)?,
        })
    }

    /// `(p, value)` pairs in column order.
    pub fn entries(&self, alpha: f64) -> [(f64, f64); 5] {
        [
            (1.0, self.l1),
            (1.0 + alpha, self.l1pa),
            (2.0, self.l2),
            (1.0 + 2.0 * alpha, self.l1p2a),
            (f64::INFINITY, self.linf),
        ]
    }

    fn sup(&self, other: &Self) -> Self {
        LpNorms {
            l1: self.l1.max(other.l1),
            l1pa: self.l1pa.max(other.l1pa),
            l2: self.l2.max(other.l2),
            l1p2a: self.l1p2a.max(other.l1p2a),
            linf: self.linf.max(other.linf),
        }
    }
}

/// One time sample of every monitored functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub entropy: f64,
    pub abs_entropy: f64,
    /// `∫⟨x⟩ n`; periodic mode only.
    pub moment: Option<f64>,
    pub lp_norms_n: LpNorms,
    pub grad_c_l2: f64,
    pub u_l2: f64,
    pub e_m: f64,
    pub d: f64,
    pub d_accum: f64,
    pub min_n: f64,
    pub min_c: f64,
    pub max_c: f64,
    pub max_n: f64,
    pub div_residual: f64,
}

pub const CSV_HEADER: &str = "t,mass,entropy,abs_entropy,moment,n_l1,n_l1pa,n_l2,n_l1p2a,n_linf,\
grad_c_l2,u_l2,e_m,d,d_accum,min_n,min_c,max_c,max_n,div_residual";

fn reject_negative(n: &ScalarField) -> Result<()> {
    let m = n.min();
    if m < -NEGATIVITY_TOLERANCE {
        return Err(Error::Negative(format!("density minimum {m:e}")));
    }
    Ok(())
}

/// `(∫ n log n, ∫ n |log n|)` with `0 log 0 = 0`.
///
/// Values in `[-1e-13, 1e-300)` are treated as zero; anything more negative
/// is rejected.
pub fn entropy(n: &ScalarField) -> Result<(f64, f64)> {
    reject_negative(n)?;
    let (mut s, mut a) = (0.0, 0.0);
    for &v in n.values() {
        if v >= ENTROPY_FLOOR {
            let e = v * v.ln();
            s += e;
            a += e.abs();
        }
    }
    let dv = n.domain().cell_volume();
    Ok((s * dv, a * dv))
}

/// `⟨x⟩ = (1 + |x|²)^{1/2}`.
pub fn japanese_bracket(x: [f64; 3]) -> f64 {
    (1.0 + x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// `∫⟨x⟩ n` over the origin-centered box, without wraparound of the weight.
pub fn weighted_moment(n: &ScalarField) -> Result<f64> {
    let d = n.domain();
    if d.mode != BoundaryMode::Periodic {
        return Err(Error::UnsupportedMode {
            mode: d.mode.name(),
            what: "weighted moment".into(),
        });
    }
    reject_negative(n)?;
    let sum: f64 = n
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| japanese_bracket(cell_center(d, i)) * v)
        .sum();
    Ok(sum * d.cell_volume())
}

/// Constant in `∫ n|log n| <= ∫ n log n + 2∫⟨x⟩n + C` on the discrete box:
/// `C = 2 ∑ ⟨x⟩ e^{-⟨x⟩} dV`, from `s log(1/s) <= s⟨x⟩ + ⟨x⟩e^{-⟨x⟩}` per cell.
pub fn entropy_moment_constant(domain: &crate::model::DomainSpec) -> f64 {
    let sum: f64 = (0..domain.len())
        .map(|i| {
            let w = japanese_bracket(cell_center(domain, i));
            w * (-w).exp()
        })
        .sum();
    2.0 * sum * domain.cell_volume()
}

/// The terms of `E_M`; `total` assembles them.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyParts {
    pub abs_entropy: f64,
    /// Absent in neumann mode.
    pub moment: Option<f64>,
    /// `‖n‖_{1+α}^{1+α}`
    pub n_pow: f64,
    /// `‖∇c‖₂²`
    pub grad_c_sq: f64,
    /// `‖u‖₂²`
    pub u_sq: f64,
}

impl EnergyParts {
    pub fn total(&self, em_weight: f64) -> f64 {
        self.abs_entropy
            + 2.0 * self.moment.unwrap_or(0.0)
            + self.n_pow
            + self.grad_c_sq
            + 0.5 * (em_weight + 2.0) * self.u_sq
    }
}

pub fn energy_parts(state: &FieldState, params: &SimParams) -> Result<EnergyParts> {
    let (_, abs_entropy) = entropy(&state.n)?;
    let moment = match state.domain().mode {
        BoundaryMode::Periodic => Some(weighted_moment(&state.n)?),
        BoundaryMode::Neumann => None,
    };
    let q = 1.0 + params.alpha;
    let grad_c = gradient(&state.c);
    Ok(EnergyParts {
        abs_entropy,
        moment,
        n_pow: lp_norm(&state.n, q)?.powf(q),
        grad_c_sq: grad_c.components().iter().map(|g| inner(g, g)).sum(),
        u_sq: state.u.components().iter().map(|c| inner(c, c)).sum(),
    })
}

/// `E_M` with `M = params.em_weight`.
pub fn energy_em(state: &FieldState, params: &SimParams) -> Result<f64> {
    Ok(energy_parts(state, params)?.total(params.em_weight))
}

fn grad_sq(f: &ScalarField, ghost: Ghost) -> f64 {
    gradient_with(f, ghost).components().iter().map(|g| inner(g, g)).sum()
}

/// `D = ‖∇n^{(1+α)/2}‖² + ‖∇n^{(1+2α)/2}‖² + ‖Δc‖² + ‖∇u‖²`.
pub fn dissipation_d(state: &FieldState, params: &SimParams) -> Result<f64> {
    reject_negative(&state.n)?;
    let a = params.alpha;
    let pow = |s: f64| state.n.map(|v| v.max(0.0).powf(s));
    let lap_c = laplacian(&state.c);
    let grad_u: f64 = state.u.components().iter().map(|c| grad_sq(c, Ghost::Odd)).sum();
    Ok(grad_sq(&pow(0.5 * (1.0 + a)), Ghost::Even)
        + grad_sq(&pow(0.5 * (1.0 + 2.0 * a)), Ghost::Even)
        + inner(&lap_c, &lap_c)
        + grad_u)
}

impl DiagnosticsRecord {
    /// Sample `state`; `previous` extends the trapezoidal `∫D`.
    pub fn from_state(
        state: &FieldState,
        params: &SimParams,
        previous: Option<&DiagnosticsRecord>,
    ) -> Result<Self> {
        let parts = energy_parts(state, params)?;
        let (entropy, abs_entropy) = entropy(&state.n)?;
        let d = dissipation_d(state, params)?;
        let d_accum = previous.map_or(0.0, |p| p.d_accum + 0.5 * (state.t - p.t) * (d + p.d));
        Ok(DiagnosticsRecord {
            t: state.t,
            mass: integrate(&state.n),
            entropy,
            abs_entropy,
            moment: parts.moment,
            lp_norms_n: LpNorms::of(&state.n, params.alpha)?,
            grad_c_l2: parts.grad_c_sq.sqrt(),
            u_l2: parts.u_sq.sqrt(),
            e_m: parts.total(params.em_weight),
            d,
            d_accum,
            min_n: state.n.min(),
            min_c: state.c.min(),
            max_c: state.c.max(),
            max_n: state.n.max(),
            div_residual: divergence(&state.u).max_abs(),
        })
    }

    /// `E_M` rebuilt from the stored components.
    pub fn recompute_e_m(&self, params: &SimParams) -> f64 {
        let q = 1.0 + params.alpha;
        EnergyParts {
            abs_entropy: self.abs_entropy,
            moment: self.moment,
            n_pow: self.lp_norms_n.l1pa.powf(q),
            grad_c_sq: self.grad_c_l2 * self.grad_c_l2,
            u_sq: self.u_l2 * self.u_l2,
        }
        .total(params.em_weight)
    }

    fn values(&self) -> [Option<f64>; 20] {
        let l = &self.lp_norms_n;
        [
            Some(self.t),
            Some(self.mass),
            Some(self.entropy),
            Some(self.abs_entropy),
            self.moment,
            Some(l.l1),
            Some(l.l1pa),
            Some(l.l2),
            Some(l.l1p2a),
            Some(l.linf),
            Some(self.grad_c_l2),
            Some(self.u_l2),
            Some(self.e_m),
            Some(self.d),
            Some(self.d_accum),
            Some(self.min_n),
            Some(self.min_c),
            Some(self.max_c),
            Some(self.max_n),
            Some(self.div_residual),
        ]
    }

    /// Every numeric entry is finite (a missing moment counts as finite).
    pub fn is_finite(&self) -> bool {
        self.values().iter().flatten().all(|v| v.is_finite())
    }

    /// One CSV row, 17 significant digits; a missing moment is an empty cell.
    pub fn csv_row(&self) -> String {
        let mut row = String::new();
        for (i, v) in self.values().iter().enumerate() {
            if i > 0 {
                row.push(',');
            }
            if let Some(v) = v {
                write!(row, "{v:.16e}").expect("string write");
            }
        }
        row
    }
}

/// Write the header and one row per record.
pub fn write_csv<W: Write>(mut out: W, records: &[DiagnosticsRecord]) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        writeln!(out, "{}", r.csv_row())?;
    }
    Ok(())
}

/// Supremum over time of each `E_M` term and of `E_M` itself.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakClassReport {
    pub sup_abs_entropy: f64,
    pub sup_moment: Option<f64>,
    pub sup_n_pow: f64,
    pub sup_grad_c_sq: f64,
    pub sup_u_sq: f64,
    pub sup_e_m: f64,
    pub d_integral: f64,
    pub all_finite: bool,
    /// Time of the first record with a non-finite entry.
    pub first_non_finite: Option<f64>,
    pub ceiling: Option<f64>,
    pub within_ceiling: bool,
}

impl WeakClassReport {
    pub fn passed(&self) -> bool {
        self.all_finite && self.within_ceiling
    }
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// Finiteness and ceiling check on the weak-solution functionals.
pub fn weak_class_check(
    series: &[DiagnosticsRecord],
    params: &SimParams,
    ceiling: Option<f64>,
) -> Result<WeakClassReport> {
    if series.is_empty() {
        return Err(Error::invalid("series", "needs at least one record"));
    }
    let q = 1.0 + params.alpha;
    let mut r = WeakClassReport {
        sup_abs_entropy: 0.0,
        sup_moment: series[0].moment.map(|_| 0.0),
        sup_n_pow: 0.0,
        sup_grad_c_sq: 0.0,
        sup_u_sq: 0.0,
        sup_e_m: 0.0,
        d_integral: series.last().map_or(0.0, |s| s.d_accum),
        all_finite: true,
        first_non_finite: None,
        ceiling,
        within_ceiling: true,
    };
    for s in series {
        r.sup_abs_entropy = nan_max(r.sup_abs_entropy, s.abs_entropy);
        r.sup_moment = match (r.sup_moment, s.moment) {
            (Some(a), Some(b)) => Some(nan_max(a, b)),
            (a, _) => a,
        };
        r.sup_n_pow = nan_max(r.sup_n_pow, s.lp_norms_n.l1pa.powf(q));
        r.sup_grad_c_sq = nan_max(r.sup_grad_c_sq, s.grad_c_l2 * s.grad_c_l2);
        r.sup_u_sq = nan_max(r.sup_u_sq, s.u_l2 * s.u_l2);
        r.sup_e_m = nan_max(r.sup_e_m, s.e_m);
        if r.all_finite && !s.is_finite() {
            r.all_finite = false;
            r.first_non_finite = Some(s.t);
        }
    }
    if let Some(c) = ceiling {
        r.within_ceiling = r.sup_e_m <= c;
    }
    Ok(r)
}

/// Sup-in-time density bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedClassReport {
    pub sup_max_n: f64,
    pub initial_max_n: f64,
    pub multiple: f64,
    pub within_bound: bool,
    /// First sample time with `max n > multiple · max n₀`.
    pub exceeded_at: Option<f64>,
    pub sup_lp_norms: LpNorms,
    /// Set when the run has fluid convection (τ = 1), outside the bounded theory.
    pub warning: Option<String>,
}

/// `sup_t max n <= multiple · max n₀` and the sup of each monitored norm.
pub fn bounded_class_check(
    series: &[DiagnosticsRecord],
    params: &SimParams,
    multiple: f64,
) -> Result<BoundedClassReport> {
    let Some(first) = series.first() else {
        return Err(Error::invalid("series", "needs at least one record"));
    };
    let limit = multiple * first.max_n;
    let mut sup_max_n = f64::NEG_INFINITY;
    let mut sup_lp = LpNorms::default();
    let mut exceeded_at = None;
    for s in series {
        sup_max_n = nan_max(sup_max_n, s.max_n);
        sup_lp = sup_lp.sup(&s.lp_norms_n);
        if exceeded_at.is_none() && !(s.max_n <= limit) {
            exceeded_at = Some(s.t);
        }
    }
    let warning = (params.tau == 1).then(|| {
        "bounded-class check applies to the Stokes case (tau = 0); reported for information".to_string()
    });
    Ok(BoundedClassReport {
        sup_max_n,
        initial_max_n: first.max_n,
        multiple,
        within_bound: exceeded_at.is_none(),
        exceeded_at,
        sup_lp_norms: sup_lp,
        warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::VectorField;
    use crate::model::DomainSpec;
    use std::f64::consts::{E, PI};

    fn unit_cube(n: usize) -> DomainSpec {
        DomainSpec::new(BoundaryMode::Periodic, &[1.0, 1.0, 1.0], &[n, n, n]).unwrap()
    }

    fn params(d: DomainSpec, alpha: f64) -> SimParams {
        SimParams::new(alpha, 1, 0.01, 1.0, d)
    }

    #[test]
    fn entropy_examples() {
        let d = unit_cube(8);
        assert_eq!(entropy(&ScalarField::zeros(d)).unwrap(), (0.0, 0.0));
        assert_eq!(entropy(&ScalarField::constant(d, 1.0)).unwrap(), (0.0, 0.0));
        let (s, a) = entropy(&ScalarField::constant(d, E)).unwrap();
        assert!((s - E).abs() < 1e-12 && (a - E).abs() < 1e-12);
        assert!(entropy(&ScalarField::constant(d, -1e-6)).is_err());
    }

    /// Reference `∫⟨x⟩` over the unit cube by 1-D Gauss–Legendre tensor product.
    fn bracket_reference() -> f64 {
        let nodes = [
            (-0.906_179_845_938_664, 0.236_926_885_056_189),
            (-0.538_469_310_105_683, 0.478_628_670_499_366),
            (0.0, 0.568_888_888_888_889),
            (0.538_469_310_105_683, 0.478_628_670_499_366),
            (0.906_179_845_938_664, 0.236_926_885_056_189),
        ];
        // composite rule over 20 panels per axis on [-1/2, 1/2]
        let panels = 20;
        let w = 1.0 / panels as f64;
        let mut pts = Vec::new();
        for p in 0..panels {
            let mid = -0.5 + (p as f64 + 0.5) * w;
            for (x, wt) in nodes {
                pts.push((mid + 0.5 * w * x, 0.5 * w * wt));
            }
        }
        let mut sum = 0.0;
        for &(x, wx) in &pts {
            for &(y, wy) in &pts {
                for &(z, wz) in &pts {
                    sum += wx * wy * wz * japanese_bracket([x, y, z]);
                }
            }
        }
        sum
    }

    #[test]
    fn moment_examples() {
        let d = unit_cube(9);
        assert_eq!(weighted_moment(&ScalarField::zeros(d)).unwrap(), 0.0);
        let mut spike = ScalarField::zeros(d);
        spike.values_mut()[(4 * 9 + 4) * 9 + 4] = 1.0 / d.cell_volume();
        assert!((weighted_moment(&spike).unwrap() - 1.0).abs() < 1e-12);

        let fine = unit_cube(32);
        let m = weighted_moment(&ScalarField::constant(fine, 1.0)).unwrap();
        let reference = bracket_reference();
        assert!((m - reference).abs() < 3e-4, "{m} vs {reference}");

        let nd = DomainSpec::new(BoundaryMode::Neumann, &[1.0, 1.0], &[8, 8]).unwrap();
        assert!(matches!(
            weighted_moment(&ScalarField::zeros(nd)),
            Err(Error::UnsupportedMode { .. })
        ));
    }

    #[test]
    fn energy_examples() {
        let d = unit_cube(16);
        assert_eq!(energy_em(&FieldState::zeros(d), &params(d, 0.5)).unwrap(), 0.0);

        let mut s = FieldState::zeros(d);
        s.n = ScalarField::constant(d, 1.0);
        let e = energy_em(&s, &params(d, 0.5)).unwrap();
        let moment = weighted_moment(&s.n).unwrap();
        assert!((e - (2.0 * moment + 1.0)).abs() < 1e-12);
        assert!((moment - bracket_reference()).abs() < 1e-3);

        s.u = VectorField::from_fn(d, |x| [(2.0 * PI * x[1]).sin(), 0.0, 0.0]);
        let mut p1 = params(d, 0.5);
        let mut p2 = p1;
        p1.em_weight = 5.0;
        p2.em_weight = 2.0;
        let u_sq: f64 = s.u.components().iter().map(|c| inner(c, c)).sum();
        let diff = energy_em(&s, &p1).unwrap() - energy_em(&s, &p2).unwrap();
        assert!((diff - 1.5 * u_sq).abs() < 1e-12);
    }

    #[test]
    fn dissipation_examples() {
        let d = unit_cube(16);
        let p = params(d, 0.5);
        assert_eq!(dissipation_d(&FieldState::zeros(d), &p).unwrap(), 0.0);
        let mut s = FieldState::zeros(d);
        s.n = ScalarField::constant(d, 3.0);
        s.c = ScalarField::from_fn(d, |x| (2.0 * PI * x[0]).cos());
        let lap = laplacian(&s.c);
        assert!((dissipation_d(&s, &p).unwrap() - inner(&lap, &lap)).abs() < 1e-9);
    }

    #[test]
    fn dissipation_matches_analytic_value() {
        // n = 2 + cos(kx): n^s has gradient -s n^{s-1} k sin; c = cos(ky):
        // ‖Δc‖² = k⁴/2; u = (sin(kz), 0, 0): ‖∇u‖² = k²/2.
        let k = 2.0 * PI;
        let alpha = 0.5;
        let reference = |s: f64| {
            let m = 4000;
            (0..m)
                .map(|i| {
                    let x = (i as f64 + 0.5) / m as f64;
                    let v = s * (2.0 + (k * x).cos()).powf(s - 1.0) * k * (k * x).sin();
                    v * v
                })
                .sum::<f64>()
                / m as f64
        };
        let exact = reference(0.75) + reference(1.0) + k.powi(4) / 2.0 + k * k / 2.0;
        let err = |n: usize| {
            let d = unit_cube(n);
            let mut s = FieldState::zeros(d);
            s.n = ScalarField::from_fn(d, |x| 2.0 + (k * x[0]).cos());
            s.c = ScalarField::from_fn(d, |x| (k * x[1]).cos());
            s.u = VectorField::from_fn(d, |x| [(k * x[2]).sin(), 0.0, 0.0]);
            (dissipation_d(&s, &params(d, alpha)).unwrap() - exact).abs()
        };
        let (e1, e2) = (err(16), err(32));
        assert!(e1 / exact < 0.1);
        assert!((e1 / e2).log2() > 1.8, "order {}", (e1 / e2).log2());
    }

    fn record(t: f64, max_n: f64) -> DiagnosticsRecord {
        DiagnosticsRecord {
            t,
            mass: 0.0,
            entropy: 0.0,
            abs_entropy: 0.0,
            moment: Some(0.0),
            lp_norms_n: LpNorms::default(),
            grad_c_l2: 0.0,
            u_l2: 0.0,
            e_m: 0.0,
            d: 0.0,
            d_accum: 0.0,
            min_n: 0.0,
            min_c: 0.0,
            max_c: 0.0,
            max_n,
            div_residual: 0.0,
        }
    }

    #[test]
    fn weak_check_examples() {
        let d = unit_cube(8);
        let p = params(d, 0.5);
        let r = weak_class_check(&[record(0.0, 0.0)], &p, Some(1.0)).unwrap();
        assert!(r.passed());
        assert_eq!(r.sup_e_m, 0.0);

        let mut bad = record(0.5, 0.0);
        bad.e_m = f64::INFINITY;
        let r = weak_class_check(&[record(0.0, 0.0), bad], &p, None).unwrap();
        assert!(!r.all_finite);
        assert_eq!(r.first_non_finite, Some(0.5));
        assert!(weak_class_check(&[], &p, None).is_err());
    }

    #[test]
    fn bounded_check_examples() {
        let d = unit_cube(8);
        let mut p = params(d, 0.15);
        p.tau = 0;
        let flat: Vec<_> = (0..4).map(|i| record(i as f64, 2.0)).collect();
        let r = bounded_class_check(&flat, &p, 1.0).unwrap();
        assert!(r.within_bound && r.warning.is_none());
        assert_eq!(r.sup_max_n, 2.0);

        let rising = vec![record(0.0, 1.0), record(1.0, 1.4), record(2.0, 2.0)];
        let r = bounded_class_check(&rising, &p, 1.5).unwrap();
        assert!(!r.within_bound);
        assert_eq!(r.exceeded_at, Some(2.0));

        p.tau = 1;
        assert!(bounded_class_check(&flat, &p, 1.0).unwrap().warning.is_some());
    }

    #[test]
    fn csv_row_has_seventeen_digits_and_empty_moment() {
        let mut r = record(0.1, 1.0 / 3.0);
        r.moment = None;
        let row = r.csv_row();
        let cells: Vec<&str> = row.split(',').collect();
        assert_eq!(cells.len(), CSV_HEADER.split(',').count());
        assert_eq!(cells[4], "");
        assert_eq!(cells[18], "3.3333333333333331e-1");
        assert_eq!(cells[18].parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn entropy_moment_inequality_holds() {
        let d = unit_cube(12);
        let c_box = entropy_moment_constant(&d);
        for scale in [1e-6, 1e-3, 0.2, 1.0, 7.0] {
            let n = ScalarField::from_fn(d, |x| scale * (1.0 + (5.0 * x[0]).sin().powi(2)) * (-4.0 * x[1]).exp());
            let (s, a) = entropy(&n).unwrap();
            let m = weighted_moment(&n).unwrap();
            assert!(a >= s.abs() - 1e-15);
            assert!(a <= s + 2.0 * m + c_box + 1e-12);
        }
    }
}
