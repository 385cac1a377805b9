//! Exact verification of the exponent arithmetic behind the a-priori
//! estimates.
//!
//! Every exponent is a rational function of `(α, p)` over arbitrary
//! precision rationals; no floating point enters this module. An entry
//! bundles named exponents, the interval each must lie in, the region of
//! `(α, p)` on which the claim is made, and (for interpolation inequalities)
//! the norm bookkeeping needed to check homogeneity under dilation and
//! amplitude scaling in three dimensions.

mod catalog;
pub mod poly;

use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
pub use catalog::{build_ledger, corrupted_entry, printed_form};
pub use poly::{rational, Poly, RatFn};

/// One end of an interval; the value may depend on `(α, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Limit {
    pub value: RatFn,
    pub closed: bool,
}

/// Interval with optional ends; a missing end is unbounded.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Interval {
    pub lo: Option<Limit>,
    pub hi: Option<Limit>,
}

impl Interval {
    pub fn new(lo: Option<(RatFn, bool)>, hi: Option<(RatFn, bool)>) -> Self {
        Interval {
            lo: lo.map(|(value, closed)| Limit { value, closed }),
            hi: hi.map(|(value, closed)| Limit { value, closed }),
        }
    }
}

/// A region inequality `expr ∈ interval`.
#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub label: String,
    pub expr: RatFn,
    pub interval: Interval,
}

/// A named exponent with its required interval.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    pub name: String,
    pub formula: String,
    pub expr: RatFn,
    pub bound: Interval,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    N,
    C,
}

/// `‖D^order (field^s)‖_q^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormFactor {
    pub field: Field,
    pub order: u32,
    pub s: RatFn,
    pub q: RatFn,
    pub k: RatFn,
}

impl NormFactor {
    /// Power of `λ` picked up under `f(x) -> f(λx)` in three dimensions.
    pub fn dilation(&self) -> RatFn {
        &self.k * (RatFn::from(self.order as i64) - 3 / &self.q)
    }

    /// Power of `μ` picked up under `field -> μ·field`.
    pub fn amplitude(&self, field: Field) -> RatFn {
        if self.field == field {
            &self.k * &self.s
        } else {
            RatFn::from(0)
        }
    }
}

/// `∏ lhs ≤ C ∏ rhs`.
#[derive(Clone, Debug, PartialEq)]
pub struct GnScaling {
    pub lhs: Vec<NormFactor>,
    pub rhs: Vec<NormFactor>,
}

/// Lattice box used by `scan_region`. Unbounded directions are capped.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanBox {
    pub alpha: (BigRational, BigRational),
    /// `p` range as functions of `α`; `None` for entries without `p`.
    pub p: Option<(RatFn, RatFn)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LedgerEntry {
    pub id: String,
    pub description: String,
    pub region_text: String,
    pub region: Vec<Constraint>,
    pub expressions: Vec<Expression>,
    pub gn_scaling: Option<GnScaling>,
    pub scan: ScanBox,
}

impl LedgerEntry {
    pub fn uses_p(&self) -> bool {
        self.scan.p.is_some()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitValue {
    pub value: BigRational,
    pub closed: bool,
}

/// One bound evaluated at a point; `value` is `None` where a denominator vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCheck {
    pub name: String,
    pub formula: String,
    pub value: Option<BigRational>,
    pub lo: Option<LimitValue>,
    pub hi: Option<LimitValue>,
    pub pass: bool,
}

impl BoundCheck {
    pub fn interval_text(&self) -> String {
        let lo = match &self.lo {
            Some(l) => format!("{}{}", if l.closed { "[" } else { "(" }, l.value),
            None => "(-inf".to_string(),
        };
        let hi = match &self.hi {
            Some(h) => format!("{}{}", h.value, if h.closed { "]" } else { ")" }),
            None => "inf)".to_string(),
        };
        format!("{lo}, {hi}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntryCheck {
    pub id: String,
    pub alpha: BigRational,
    pub p: BigRational,
    /// Whether `(α, p)` lies in the entry's region.
    pub applicable: bool,
    /// Region inequalities that fail at the point.
    pub region_failures: Vec<String>,
    pub bounds: Vec<BoundCheck>,
}

impl EntryCheck {
    /// Applicable and every bound holds.
    pub fn passed(&self) -> bool {
        self.applicable && self.bounds.iter().all(|b| b.pass)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.bounds.iter().filter(|b| !b.pass).map(|b| b.name.as_str()).collect()
    }
}

fn eval_limit(l: &Limit, a: &BigRational, p: &BigRational, what: &str) -> Result<LimitValue> {
    Ok(LimitValue {
        value: l.value.eval(a, p, what)?,
        closed: l.closed,
    })
}

fn within(v: &BigRational, lo: &Option<LimitValue>, hi: &Option<LimitValue>) -> bool {
    let lo_ok = lo.as_ref().is_none_or(|l| if l.closed { *v >= l.value } else { *v > l.value });
    let hi_ok = hi.as_ref().is_none_or(|h| if h.closed { *v <= h.value } else { *v < h.value });
    lo_ok && hi_ok
}

/// `expr ∈ interval` at a point; a vanishing denominator is an error.
fn eval_in(
    expr: &RatFn,
    interval: &Interval,
    a: &BigRational,
    p: &BigRational,
    name: &str,
) -> Result<(BigRational, Option<LimitValue>, Option<LimitValue>, bool)> {
    let v = expr.eval(a, p, name)?;
    let lo = interval.lo.as_ref().map(|l| eval_limit(l, a, p, &format!("lower bound of {name}"))).transpose()?;
    let hi = interval.hi.as_ref().map(|l| eval_limit(l, a, p, &format!("upper bound of {name}"))).transpose()?;
    let ok = within(&v, &lo, &hi);
    Ok((v, lo, hi, ok))
}

/// Region membership, with the labels of failed inequalities.
pub fn region_failures(entry: &LedgerEntry, alpha: &BigRational, p: &BigRational) -> Vec<String> {
    entry
        .region
        .iter()
        .filter(|c| !matches!(eval_in(&c.expr, &c.interval, alpha, p, &c.label), Ok((_, _, _, true))))
        .map(|c| c.label.clone())
        .collect()
}

/// Evaluate every expression of `entry` at `(alpha, p)`.
///
/// Inside the region a vanishing denominator is a catalog bug and is
/// returned as `Error::ZeroDenominator`; outside it the bound is reported
/// as failed with no value. All bounds are evaluated in both cases so an
/// out-of-region point still yields a diagnostic table.
pub fn check_entry(entry: &LedgerEntry, alpha: &BigRational, p: &BigRational) -> Result<EntryCheck> {
    let region_failures = region_failures(entry, alpha, p);
    let applicable = region_failures.is_empty();
    let mut bounds = Vec::with_capacity(entry.expressions.len());
    for e in &entry.expressions {
        let check = match eval_in(&e.expr, &e.bound, alpha, p, &e.name) {
            Ok((v, lo, hi, pass)) => BoundCheck {
                name: e.name.clone(),
                formula: e.formula.clone(),
                value: Some(v),
                lo,
                hi,
                pass,
            },
            Err(err @ Error::ZeroDenominator(_)) if applicable => {
                return Err(Error::ZeroDenominator(format!("{} in entry {}: {err}", e.name, entry.id)))
            }
            Err(Error::ZeroDenominator(_)) => BoundCheck {
                name: e.name.clone(),
                formula: e.formula.clone(),
                value: None,
                lo: None,
                hi: None,
                pass: false,
            },
            Err(other) => return Err(other),
        };
        bounds.push(check);
    }
    Ok(EntryCheck {
        id: entry.id.clone(),
        alpha: alpha.clone(),
        p: p.clone(),
        applicable,
        region_failures,
        bounds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalingOutcome {
    /// Both sides scale identically in `λ` and in each field amplitude.
    Pass,
    Fail {
        dilation_mismatch: bool,
        amplitude_mismatch: Vec<Field>,
    },
    /// The entry carries no interpolation inequality.
    NotApplicable,
}

impl ScalingOutcome {
    /// `NotApplicable` is not a failure.
    pub fn is_ok(&self) -> bool {
        !matches!(self, ScalingOutcome::Fail { .. })
    }
}

impl fmt::Display for ScalingOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalingOutcome::Pass => write!(f, "pass"),
            ScalingOutcome::NotApplicable => write!(f, "n/a"),
            ScalingOutcome::Fail {
                dilation_mismatch,
                amplitude_mismatch,
            } => {
                write!(f, "fail")?;
                if *dilation_mismatch {
                    write!(f, " (dilation)")?;
                }
                for field in amplitude_mismatch {
                    write!(f, " (amplitude {field:?})")?;
                }
                Ok(())
            }
        }
    }
}

fn sum(factors: &[NormFactor], g: impl Fn(&NormFactor) -> RatFn) -> RatFn {
    factors.iter().fold(RatFn::from(0), |acc, f| acc + g(f))
}

/// Symbolic homogeneity check: each side's power of `λ` (and of each
/// field amplitude) must agree identically in `(α, p)`.
pub fn scaling_check(entry: &LedgerEntry) -> ScalingOutcome {
    let Some(gn) = &entry.gn_scaling else {
        return ScalingOutcome::NotApplicable;
    };
    let dil = sum(&gn.lhs, NormFactor::dilation) - sum(&gn.rhs, NormFactor::dilation);
    let dilation_mismatch = !dil.is_identically_zero();
    let amplitude_mismatch: Vec<Field> = [Field::N, Field::C]
        .into_iter()
        .filter(|&field| {
            let d = sum(&gn.lhs, |f| f.amplitude(field)) - sum(&gn.rhs, |f| f.amplitude(field));
            !d.is_identically_zero()
        })
        .collect();
    if dilation_mismatch || !amplitude_mismatch.is_empty() {
        ScalingOutcome::Fail {
            dilation_mismatch,
            amplitude_mismatch,
        }
    } else {
        ScalingOutcome::Pass
    }
}

/// Observed extent of one expression over the interior lattice.
#[derive(Clone, Debug, PartialEq)]
pub struct ValueRange {
    pub name: String,
    pub min: BigRational,
    pub max: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub alpha: BigRational,
    pub p: BigRational,
    pub failing: Vec<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSummary {
    pub id: String,
    pub density: usize,
    /// Lattice points that lie in the region.
    pub interior_points: usize,
    pub interior_pass: usize,
    /// At most `MAX_COUNTEREXAMPLES` failing interior points, in lattice order.
    pub counterexamples: Vec<Counterexample>,
    pub collar_points: usize,
    pub collar_inapplicable: usize,
    /// Collar points inside the region (only past a capped, unbounded end).
    pub collar_applicable_pass: usize,
    pub collar_applicable_fail: usize,
    pub ranges: Vec<ValueRange>,
}

impl ScanSummary {
    pub fn all_interior_pass(&self) -> bool {
        self.interior_pass == self.interior_points
    }
}

pub const MAX_COUNTEREXAMPLES: usize = 10;

/// `lo + (hi - lo)·i/(d + 1)`; `i ∈ 1..=d` gives strictly interior points,
/// `0` and `d + 1` the box ends, `-1` and `d + 2` one step outside.
fn lattice(lo: &BigRational, hi: &BigRational, i: i64, d: usize) -> BigRational {
    lo + (hi - lo) * BigRational::new(BigInt::from(i), BigInt::from(d as i64 + 1))
}

enum PointKind {
    Interior,
    Collar,
}

/// Evaluate `check_entry` on a `density × density` lattice strictly inside
/// the entry's scan box and on a one-step collar around it.
pub fn scan_region(entry: &LedgerEntry, density: usize) -> Result<ScanSummary> {
    if density < 2 {
        return Err(Error::invalid("density", "grid density must be at least 2"));
    }
    let (alo, ahi) = &entry.scan.alpha;
    let d = density as i64;
    let mut points: Vec<(BigRational, BigRational, PointKind)> = Vec::new();
    let zero = BigRational::zero();
    let p_range = |a: &BigRational| -> Result<Option<(BigRational, BigRational)>> {
        match &entry.scan.p {
            None => Ok(None),
            Some((lo, hi)) => Ok(Some((lo.eval(a, &zero, "p scan lower")?, hi.eval(a, &zero, "p scan upper")?))),
        }
    };
    for i in -1..=d + 2 {
        if i == 0 || i == d + 1 {
            continue;
        }
        let a = lattice(alo, ahi, i, density);
        let alpha_interior = (1..=d).contains(&i);
        match p_range(&a)? {
            None => {
                let kind = if alpha_interior { PointKind::Interior } else { PointKind::Collar };
                points.push((a.clone(), zero.clone(), kind));
            }
            Some((plo, phi)) => {
                for j in -1..=d + 2 {
                    if j == 0 || j == d + 1 {
                        continue;
                    }
                    let p_interior = (1..=d).contains(&j);
                    // Corners of the collar ring are skipped; edges suffice.
                    if !alpha_interior && !p_interior {
                        continue;
                    }
                    let kind = if alpha_interior && p_interior { PointKind::Interior } else { PointKind::Collar };
                    points.push((a.clone(), lattice(&plo, &phi, j, density), kind));
                }
            }
        }
    }
    let results: Vec<Result<(EntryCheck, PointKind)>> = points
        .into_par_iter()
        .map(|(a, p, kind)| check_entry(entry, &a, &p).map(|c| (c, kind)))
        .collect();

    let mut summary = ScanSummary {
        id: entry.id.clone(),
        density,
        interior_points: 0,
        interior_pass: 0,
        counterexamples: Vec::new(),
        collar_points: 0,
        collar_inapplicable: 0,
        collar_applicable_pass: 0,
        collar_applicable_fail: 0,
        ranges: Vec::new(),
    };
    let mut ranges: Vec<Option<(BigRational, BigRational)>> = vec![None; entry.expressions.len()];
    for r in results {
        let (check, kind) = r?;
        match kind {
            PointKind::Interior => {
                // Lattice points of the box that miss the region are not interior.
                if !check.applicable {
                    continue;
                }
                summary.interior_points += 1;
                if check.passed() {
                    summary.interior_pass += 1;
                } else if summary.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    summary.counterexamples.push(Counterexample {
                        alpha: check.alpha.clone(),
                        p: check.p.clone(),
                        failing: check.failing().into_iter().map(str::to_string).collect(),
                    });
                }
                for (slot, b) in ranges.iter_mut().zip(&check.bounds) {
                    let v = b.value.clone().expect("applicable points evaluate every expression");
                    *slot = Some(match slot.take() {
                        None => (v.clone(), v),
                        Some((lo, hi)) => (if v < lo { v.clone() } else { lo }, if v > hi { v } else { hi }),
                    });
                }
            }
            PointKind::Collar => {
                summary.collar_points += 1;
                if !check.applicable {
                    summary.collar_inapplicable += 1;
                } else if check.passed() {
                    summary.collar_applicable_pass += 1;
                } else {
                    summary.collar_applicable_fail += 1;
                }
            }
        }
    }
    summary.ranges = entry
        .expressions
        .iter()
        .zip(ranges)
        .filter_map(|(e, r)| {
            r.map(|(min, max)| ValueRange {
                name: e.name.clone(),
                min,
                max,
            })
        })
        .collect();
    Ok(summary)
}

/// Parse `"1/3"`, `"-2"` or `"0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Rational(s.to_string());
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let whole: BigInt = match int {
            "" | "-" | "+" => BigInt::zero(),
            _ => int.parse().map_err(|_| bad())?,
        };
        let digits: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num::pow(BigInt::from(10), frac.len());
        let mag = BigRational::new(whole.abs() * &scale + digits, scale);
        return Ok(if negative { -mag } else { mag });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// Exact rationals rendered as `n/d`; integers without denominator.
pub fn format_rational(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
