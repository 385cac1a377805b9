//! Model parameters, the chemotactic sensitivity / oxygen consumption family,
//! and classification of a parameter set against the two structural
//! assumption lists (weak and bounded-weak existence).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Boundary treatment of the computational box.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMode {
    /// Periodic box centered at the origin, used as a whole-space proxy.
    Periodic,
    /// Bounded box: zero normal derivative for `n` and `c`, no-slip for `u`.
    Neumann,
}

impl BoundaryMode {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryMode::Periodic => "periodic",
            BoundaryMode::Neumann => "neumann",
        }
    }
}

pub const MIN_RESOLUTION: usize = 8;

/// Structured box description. Axes beyond `dim` carry length 1 and a single
/// cell so that storage is always three-dimensional.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainSpec {
    pub dim: usize,
    pub mode: BoundaryMode,
    pub lengths: [f64; 3],
    pub resolution: [usize; 3],
}

impl DomainSpec {
    pub fn new(mode: BoundaryMode, lengths: &[f64], resolution: &[usize]) -> Result<Self> {
        let errors = Self::check(mode, lengths, resolution);
        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }
        let dim = lengths.len();
        let mut l = [1.0; 3];
        let mut r = [1usize; 3];
        l[..dim].copy_from_slice(lengths);
        r[..dim].copy_from_slice(resolution);
        Ok(DomainSpec {
            dim,
            mode,
            lengths: l,
            resolution: r,
        })
    }

    /// Every violated constraint, as human-readable messages.
    pub fn check(mode: BoundaryMode, lengths: &[f64], resolution: &[usize]) -> Vec<String> {
        let mut errors = Vec::new();
        let dim = lengths.len();
        if !(1..=3).contains(&dim) {
            errors.push(format!("domain.lengths: dim must be 1, 2 or 3 (got {dim})"));
        }
        if resolution.len() != dim {
            errors.push(format!(
                "domain.resolution: expected {dim} entries to match domain.lengths (got {})",
                resolution.len()
            ));
        }
        for (axis, &l) in lengths.iter().enumerate() {
            if !(l.is_finite() && l > 0.0) {
                errors.push(format!("domain.lengths[{axis}]: extent must be > 0 (got {l})"));
            }
        }
        for (axis, &r) in resolution.iter().enumerate() {
            if r < MIN_RESOLUTION {
                errors.push(format!(
                    "domain.resolution[{axis}]: at least {MIN_RESOLUTION} cells required (got {r})"
                ));
            }
        }
        if mode == BoundaryMode::Neumann && dim < 2 {
            errors.push("domain.mode: neumann mode requires dim >= 2 for the fluid solve".into());
        }
        errors
    }

    pub fn cell_size(&self, axis: usize) -> f64 {
        self.lengths[axis] / self.resolution[axis] as f64
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.cell_size(a)).product()
    }

    pub fn volume(&self) -> f64 {
        self.lengths[..self.dim].iter().product()
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Smallest cell size over the active axes.
    pub fn min_cell_size(&self) -> f64 {
        (0..self.dim)
            .map(|a| self.cell_size(a))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Scalar model parameters of the regularized system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimParams {
    /// Porous-medium exponent: diffusion acts on `(n + rho)^(1 + alpha)`.
    pub alpha: f64,
    /// 1 keeps the fluid convection term (Navier-Stokes), 0 drops it (Stokes).
    pub tau: u8,
    /// Regularization shift, also the mollifier radius.
    pub rho: f64,
    /// The weight `M` multiplying the fluid energy in `E_M`.
    pub em_weight: f64,
    /// Constant potential gradient, force per unit density.
    pub phi_gradient: [f64; 3],
    pub t_final: f64,
    pub cfl_safety: f64,
    /// Optional hard cap on the time step (used by temporal refinement studies).
    pub dt_max: Option<f64>,
    pub domain: DomainSpec,
}

impl SimParams {
    pub const DEFAULT_EM_WEIGHT: f64 = 1.0;
    pub const DEFAULT_CFL_SAFETY: f64 = 0.4;

    /// Parameters with library defaults for everything but the essentials.
    pub fn new(alpha: f64, tau: u8, rho: f64, t_final: f64, domain: DomainSpec) -> Self {
        SimParams {
            alpha,
            tau,
            rho,
            em_weight: Self::DEFAULT_EM_WEIGHT,
            phi_gradient: [0.0; 3],
            t_final,
            cfl_safety: Self::DEFAULT_CFL_SAFETY,
            dt_max: None,
            domain,
        }
    }

    /// Every violated invariant, keyed by config path.
    pub fn violations(&self) -> Vec<String> {
        let mut errors = Vec::new();
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            errors.push(format!("params.alpha: must satisfy alpha > 0 (got {})", self.alpha));
        }
        if self.tau > 1 {
            errors.push(format!("params.tau: must be 0 or 1 (got {})", self.tau));
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            errors.push(format!("params.rho: must lie in (0, 1) (got {})", self.rho));
        }
        if !(self.em_weight.is_finite() && self.em_weight > 0.0) {
            errors.push(format!("params.em_weight: must be > 0 (got {})", self.em_weight));
        }
        if !(self.t_final.is_finite() && self.t_final >= 0.0) {
            errors.push(format!("params.t_final: must be >= 0 (got {})", self.t_final));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            errors.push(format!(
                "params.cfl_safety: must lie in (0, 1] (got {})",
                self.cfl_safety
            ));
        }
        if let Some(cap) = self.dt_max {
            if !(cap.is_finite() && cap > 0.0) {
                errors.push(format!("params.dt_max: must be > 0 (got {cap})"));
            }
        }
        if self.phi_gradient.iter().any(|g| !g.is_finite()) {
            errors.push("params.phi_gradient: entries must be finite".into());
        }
        errors
    }

    pub fn validate(&self) -> Result<()> {
        let errors = self.violations();
        if errors.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(errors))
        }
    }
}

/// `chi(c) = chi_offset + chi_slope * c`, `kappa(c) = kappa_coeff * c^kappa_power`.
///
/// The power family makes `kappa(0) = 0` hold identically.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiKappaModel {
    pub chi_offset: f64,
    pub chi_slope: f64,
    pub kappa_coeff: f64,
    pub kappa_power: f64,
}

impl ChiKappaModel {
    pub fn new(chi_offset: f64, chi_slope: f64, kappa_coeff: f64, kappa_power: f64) -> Result<Self> {
        let model = ChiKappaModel {
            chi_offset,
            chi_slope,
            kappa_coeff,
            kappa_power,
        };
        let errors = model.violations();
        if errors.is_empty() {
            Ok(model)
        } else {
            Err(Error::Config(errors))
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut errors = Vec::new();
        let nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !nonneg(self.chi_offset) {
            errors.push(format!("model.chi_offset: must be >= 0 (got {})", self.chi_offset));
        }
        if !nonneg(self.chi_slope) {
            errors.push(format!("model.chi_slope: must be >= 0 (got {})", self.chi_slope));
        }
        if !nonneg(self.kappa_coeff) {
            errors.push(format!("model.kappa_coeff: must be >= 0 (got {})", self.kappa_coeff));
        }
        if !(self.kappa_power.is_finite() && self.kappa_power >= 1.0) {
            errors.push(format!(
                "model.kappa_power: must be >= 1 (got {})",
                self.kappa_power
            ));
        }
        errors
    }

    pub fn eval_chi(&self, c: f64) -> Result<f64> {
        if c < 0.0 {
            return Err(Error::Negative(format!("chi evaluated at c = {c}")));
        }
        Ok(self.chi(c))
    }

    pub fn eval_kappa(&self, c: f64) -> Result<f64> {
        if c < 0.0 {
            return Err(Error::Negative(format!("kappa evaluated at c = {c}")));
        }
        Ok(self.kappa(c))
    }

    /// Unchecked `chi`, for hot loops over fields already known to be nonnegative.
    #[inline]
    pub fn chi(&self, c: f64) -> f64 {
        self.chi_offset + self.chi_slope * c
    }

    #[inline]
    pub fn kappa(&self, c: f64) -> f64 {
        if c == 0.0 {
            0.0
        } else {
            self.kappa_coeff * c.powf(self.kappa_power)
        }
    }

    /// `kappa(c) / c`, continuous at zero: `kappa_coeff * c^(m - 1)`.
    #[inline]
    pub fn kappa_over_c(&self, c: f64) -> f64 {
        if self.kappa_power == 1.0 {
            self.kappa_coeff
        } else {
            self.kappa_coeff * c.powf(self.kappa_power - 1.0)
        }
    }

    pub fn chi_prime(&self, _c: f64) -> f64 {
        self.chi_slope
    }

    pub fn kappa_prime(&self, c: f64) -> f64 {
        let m = self.kappa_power;
        if m == 1.0 {
            self.kappa_coeff
        } else {
            self.kappa_coeff * m * c.powf(m - 1.0)
        }
    }

    /// Infimum of `kappa'` over `[0, c_max]`. `kappa'` is nondecreasing in `c`
    /// for `m >= 1`, so the infimum sits at `c = 0`.
    fn kappa_prime_inf(&self, _c_max: f64) -> f64 {
        self.kappa_prime(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Clause {
    I,
    II,
    III,
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Clause::I => "i",
            Clause::II => "ii",
            Clause::III => "iii",
        })
    }
}

/// Which clauses of the weak-solution and bounded-weak-solution assumption
/// lists a parameter set satisfies.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssumptionCase {
    pub weak: BTreeSet<Clause>,
    pub bounded: BTreeSet<Clause>,
    /// Lower bound of `chi'` over the admitted range, when clause (ii) holds anywhere.
    pub chi_lower_bound: Option<f64>,
    /// Lower bound of `kappa'` over the admitted range, when clause (iii) holds anywhere.
    pub kappa_lower_bound: Option<f64>,
}

impl AssumptionCase {
    pub fn any_weak(&self) -> bool {
        !self.weak.is_empty()
    }

    pub fn any_bounded(&self) -> bool {
        !self.bounded.is_empty()
    }
}

fn fmt_set(set: &BTreeSet<Clause>) -> String {
    let items: Vec<String> = set.iter().map(|c| c.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for AssumptionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "weak {}, bounded {}", fmt_set(&self.weak), fmt_set(&self.bounded))?;
        if let Some(chi0) = self.chi_lower_bound {
            write!(f, "; chi' >= {chi0}")?;
        }
        if let Some(kappa0) = self.kappa_lower_bound {
            write!(f, "; kappa' >= {kappa0}")?;
        }
        Ok(())
    }
}

pub const WEAK_ALPHA_THRESHOLD: f64 = 1.0 / 6.0;
pub const BOUNDED_ALPHA_THRESHOLD: f64 = 1.0 / 8.0;

/// Classify `(model, alpha)` against both assumption lists, testing the
/// derivative lower bounds over `[0, c_max]`.
pub fn classify_assumption(
    model: &ChiKappaModel,
    params: &SimParams,
    c_max: f64,
) -> Result<AssumptionCase> {
    if !(c_max >= 0.0) {
        return Err(Error::Negative(format!("c_max = {c_max}")));
    }
    let alpha = params.alpha;
    let chi0 = model.chi_slope;
    let kappa0 = model.kappa_prime_inf(c_max);

    let mut weak = BTreeSet::new();
    let mut bounded = BTreeSet::new();
    if alpha > WEAK_ALPHA_THRESHOLD {
        weak.insert(Clause::I);
        bounded.insert(Clause::I);
    }
    if alpha > 0.0 && chi0 > 0.0 {
        weak.insert(Clause::II);
    }
    if alpha > 0.0 && kappa0 > 0.0 {
        weak.insert(Clause::III);
    }
    if alpha > BOUNDED_ALPHA_THRESHOLD && chi0 > 0.0 {
        bounded.insert(Clause::II);
    }
    if alpha > BOUNDED_ALPHA_THRESHOLD && kappa0 > 0.0 {
        bounded.insert(Clause::III);
    }

    Ok(AssumptionCase {
        weak,
        bounded,
        chi_lower_bound: (chi0 > 0.0).then_some(chi0),
        kappa_lower_bound: (kappa0 > 0.0).then_some(kappa0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(alpha: f64) -> SimParams {
        let domain = DomainSpec::new(BoundaryMode::Periodic, &[1.0], &[8]).unwrap();
        SimParams::new(alpha, 0, 0.01, 1.0, domain)
    }

    fn set(items: &[Clause]) -> BTreeSet<Clause> {
        items.iter().copied().collect()
    }

    #[test]
    fn linear_chi_and_kappa_satisfy_everything() {
        let model = ChiKappaModel::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let case = classify_assumption(&model, &params(0.2), 1.0).unwrap();
        let all = set(&[Clause::I, Clause::II, Clause::III]);
        assert_eq!(case.weak, all);
        assert_eq!(case.bounded, all);
    }

    #[test]
    fn constant_chi_linear_kappa_is_clause_three() {
        let model = ChiKappaModel::new(1.0, 0.0, 1.0, 1.0).unwrap();
        let case = classify_assumption(&model, &params(0.15), 1.0).unwrap();
        assert_eq!(case.weak, set(&[Clause::III]));
        assert_eq!(case.bounded, set(&[Clause::III]));
        assert_eq!(case.kappa_lower_bound, Some(1.0));
        assert_eq!(case.to_string(), "weak {iii}, bounded {iii}; kappa' >= 1");
    }

    #[test]
    fn quadratic_kappa_degenerates_at_zero() {
        let model = ChiKappaModel::new(1.0, 0.0, 1.0, 2.0).unwrap();
        let case = classify_assumption(&model, &params(0.1), 1.0).unwrap();
        assert!(case.weak.is_empty());
        assert!(case.bounded.is_empty());
    }

    #[test]
    fn bounded_clauses_need_alpha_above_one_eighth() {
        let model = ChiKappaModel::new(0.0, 2.0, 1.0, 1.0).unwrap();
        let case = classify_assumption(&model, &params(0.1), 1.0).unwrap();
        assert_eq!(case.weak, set(&[Clause::II, Clause::III]));
        assert!(case.bounded.is_empty());
        assert_eq!(case.chi_lower_bound, Some(2.0));
    }

    #[test]
    fn rejects_negative_c_max() {
        let model = ChiKappaModel::new(1.0, 0.0, 1.0, 1.0).unwrap();
        assert!(classify_assumption(&model, &params(0.2), -0.5).is_err());
    }

    #[test]
    fn chi_and_kappa_values() {
        let constant = ChiKappaModel::new(1.0, 0.0, 2.0, 1.0).unwrap();
        assert_eq!(constant.eval_chi(0.7).unwrap(), 1.0);
        assert_eq!(constant.eval_kappa(0.5).unwrap(), 1.0);
        assert_eq!(constant.eval_kappa(0.0).unwrap(), 0.0);
        assert!(constant.eval_chi(-1e-3).is_err());
        assert!(constant.eval_kappa(-1e-3).is_err());
    }

    #[test]
    fn model_validation_lists_every_problem() {
        let err = ChiKappaModel::new(-1.0, 0.0, -1.0, 0.5).unwrap_err();
        match err {
            Error::Config(list) => assert_eq!(list.len(), 3),
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn params_validation() {
        let mut p = params(0.0);
        p.tau = 2;
        p.rho = 1.0;
        let errs = p.violations();
        assert!(errs.iter().any(|e| e.contains("alpha > 0")));
        assert!(errs.iter().any(|e| e.contains("params.tau")));
        assert!(errs.iter().any(|e| e.contains("params.rho")));
    }

    #[test]
    fn domain_checks() {
        assert!(DomainSpec::new(BoundaryMode::Neumann, &[1.0], &[16]).is_err());
        assert!(DomainSpec::new(BoundaryMode::Periodic, &[1.0, 1.0], &[16, 4]).is_err());
        assert!(DomainSpec::new(BoundaryMode::Periodic, &[1.0, -1.0], &[16, 16]).is_err());
        let d = DomainSpec::new(BoundaryMode::Periodic, &[2.0, 1.0], &[16, 8]).unwrap();
        assert_eq!(d.len(), 128);
        assert_eq!(d.cell_size(0), 0.125);
        assert_eq!(d.volume(), 2.0);
    }

    proptest! {
        #[test]
        fn kappa_nonnegative_and_vanishes_at_zero(
            kb in 0.0f64..10.0, m in 1.0f64..5.0, c in 0.0f64..100.0
        ) {
            let model = ChiKappaModel::new(1.0, 0.0, kb, m).unwrap();
            prop_assert!(model.eval_kappa(c).unwrap() >= 0.0);
            prop_assert_eq!(model.eval_kappa(0.0).unwrap(), 0.0);
        }

        #[test]
        fn classification_is_monotone_in_alpha(
            a in 0.001f64..1.0, da in 0.0f64..1.0,
            chi_b in prop::sample::select(vec![0.0, 0.5]),
            kb in prop::sample::select(vec![0.0, 1.0]),
            m in prop::sample::select(vec![1.0, 2.0]),
        ) {
            let model = ChiKappaModel::new(1.0, chi_b, kb, m).unwrap();
            let lo = classify_assumption(&model, &params(a), 1.0).unwrap();
            let hi = classify_assumption(&model, &params(a + da), 1.0).unwrap();
            prop_assert!(lo.weak.is_subset(&hi.weak));
            prop_assert!(lo.bounded.is_subset(&hi.bounded));
        }

        #[test]
        fn witnesses_are_exact(chi_b in 0.01f64..5.0, kb in 0.01f64..5.0) {
            let model = ChiKappaModel::new(0.0, chi_b, kb, 1.0).unwrap();
            let case = classify_assumption(&model, &params(0.5), 2.0).unwrap();
            prop_assert_eq!(case.chi_lower_bound, Some(chi_b));
            prop_assert_eq!(case.kappa_lower_bound, Some(kb));
        }
    }
}
