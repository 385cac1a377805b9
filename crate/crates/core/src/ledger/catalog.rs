//! The fixed catalog of exponent claims.
//!
//! Open and closed ends follow the printed inequalities. Two printed
//! interpolation exponents do not scale homogeneously; the catalog stores the
//! homogeneous forms and `printed_form` reproduces the printed ones.

use num::BigRational;

use super::poly::{rational, RatFn};
use super::{Constraint, Expression, Field, GnScaling, Interval, LedgerEntry, NormFactor, ScanBox};

fn a() -> RatFn {
    RatFn::alpha()
}

fn p() -> RatFn {
    RatFn::p()
}

fn q(n: i64, d: i64) -> RatFn {
    RatFn::constant(rational(n, d))
}

fn open(lo: RatFn, hi: RatFn) -> Interval {
    Interval::new(Some((lo, false)), Some((hi, false)))
}

fn closed_open(lo: RatFn, hi: RatFn) -> Interval {
    Interval::new(Some((lo, true)), Some((hi, false)))
}

fn open_closed(lo: RatFn, hi: RatFn) -> Interval {
    Interval::new(Some((lo, false)), Some((hi, true)))
}

fn closed(lo: RatFn, hi: RatFn) -> Interval {
    Interval::new(Some((lo, true)), Some((hi, true)))
}

fn above(lo: RatFn) -> Interval {
    Interval::new(Some((lo, false)), None)
}

fn expr(name: &str, formula: &str, e: RatFn, bound: Interval) -> Expression {
    Expression {
        name: name.into(),
        formula: formula.into(),
        expr: e,
        bound,
    }
}

fn alpha_in(interval: Interval) -> Constraint {
    Constraint {
        label: "alpha".into(),
        expr: a(),
        interval,
    }
}

fn p_in(interval: Interval) -> Constraint {
    Constraint {
        label: "p".into(),
        expr: p(),
        interval,
    }
}

/// `‖field^s‖_q^k`.
fn lebesgue(field: Field, q: RatFn, k: RatFn) -> NormFactor {
    NormFactor {
        field,
        order: 0,
        s: q_one(),
        q,
        k,
    }
}

/// `‖∇(n^s)‖_2^k`.
fn grad_power(s: RatFn, k: RatFn) -> NormFactor {
    NormFactor {
        field: Field::N,
        order: 1,
        s,
        q: RatFn::from(2),
        k,
    }
}

fn q_one() -> RatFn {
    RatFn::from(1)
}

fn ratio(n: i64, d: i64) -> BigRational {
    rational(n, d)
}

/// Lattice cap for unbounded `α` ranges.
const ALPHA_CAP: i64 = 4;
/// Lattice span in `p` above `1 + α` for unbounded `p` ranges.
const P_SPAN: i64 = 20;

fn alpha_box(lo: BigRational, hi: BigRational) -> ScanBox {
    ScanBox { alpha: (lo, hi), p: None }
}

fn ap_box(lo: BigRational, hi: BigRational, plo: RatFn, phi: RatFn) -> ScanBox {
    ScanBox {
        alpha: (lo, hi),
        p: Some((plo, phi)),
    }
}

struct Entry {
    id: &'static str,
    description: &'static str,
    region_text: &'static str,
    region: Vec<Constraint>,
    expressions: Vec<Expression>,
    gn: Option<GnScaling>,
    scan: ScanBox,
}

impl From<Entry> for LedgerEntry {
    fn from(e: Entry) -> Self {
        LedgerEntry {
            id: e.id.into(),
            description: e.description.into(),
            region_text: e.region_text.into(),
            region: e.region,
            expressions: e.expressions,
            gn_scaling: e.gn,
            scan: e.scan,
        }
    }
}

// ---- shared symbols ----

fn r1() -> RatFn {
    (6 + 6 * a()) / (5 + 14 * a() - 3 * p())
}

fn r2() -> RatFn {
    p() - a() + 1
}

fn theta1() -> RatFn {
    (p() + a()) * (3 * p() - 14 * a() + 1) / (2 * (3 * p() + 2 * a() - 1))
}

fn theta2() -> RatFn {
    3 * (p() + a()) * (p() - 3 * a()) / (2 * (1 + a()) * (3 * p() + 3 * a() - 1))
}

fn theta3() -> RatFn {
    3 * (p() + a()) * (r2() - 1 - a()) / (r2() * (3 * p() + 2 * a() - 1))
}

fn theta4() -> RatFn {
    (p() + a()) * (5 * r2() - 6) / (r2() * (6 * p() + 6 * a() - 2))
}

fn theta5() -> RatFn {
    3 * (p() - a() - 1) / (2 * r2())
}

fn p0() -> RatFn {
    q(3, 2) - 3 * a() / 4
}

/// Exponent of `‖n‖_{3+6α}` in the `α > 1/3` bound for `‖n‖_{6p/(2p+3α)}²`.
fn high_x() -> RatFn {
    (1 + 2 * a()) * (4 * p() - 3 * a()) / (2 * p() * (1 + 3 * a()))
}

fn high_y() -> RatFn {
    3 * (1 + 2 * a()) * (p() - a()) / (2 * p() * (1 + 3 * a()))
}

/// Exponent of `‖n‖_{3p₀+3α}` bounding `‖n‖_{6p/(2p+3α)}²` for small `α`.
fn low_z() -> RatFn {
    (p0() + a()) * (6 * p() - 2 * p() * p0() - 3 * a() * p0()) / (p() * (2 * p0() + 3 * a()))
}

fn low_z_prime() -> RatFn {
    3 * (1 + 2 * a()) * (p() - a() * p() - a() - a() * a()) / (p() * (2 + 5 * a()))
}

fn l2_gn() -> GnScaling {
    GnScaling {
        lhs: vec![lebesgue(Field::N, RatFn::from(2), RatFn::from(2))],
        rhs: vec![
            lebesgue(Field::N, q_one(), (1 + 6 * a()) / (2 + 6 * a())),
            grad_power((1 + 2 * a()) / 2, 6 / (2 + 6 * a())),
        ],
    }
}

/// `‖n‖_{lhs_q}^{lhs_k} ≤ ‖n‖_{base_q}^{lhs_k(1-θ)} ‖∇n^{(p+α)/2}‖_2^{δ}`,
/// the composite of Hölder interpolation and `‖n‖_{3p+3α} ≲ ‖∇n^{(p+α)/2}‖^{2/(p+α)}`.
fn moser_gn(lhs_q: RatFn, lhs_k: RatFn, base_q: RatFn, theta: RatFn, delta: RatFn) -> GnScaling {
    GnScaling {
        lhs: vec![lebesgue(Field::N, lhs_q, lhs_k.clone())],
        rhs: vec![
            lebesgue(Field::N, base_q, lhs_k * (1 - theta)),
            grad_power((p() + a()) / 2, delta),
        ],
    }
}

fn low_alpha() -> Constraint {
    alpha_in(open_closed(q(1, 8), q(1, 3)))
}

fn low_p_range() -> Constraint {
    p_in(open(1 + a(), 1 + 4 * a()))
}

fn low_box() -> ScanBox {
    ap_box(ratio(1, 8), ratio(1, 3), 1 + a(), 1 + 4 * a())
}

fn high_box() -> ScanBox {
    ap_box(ratio(1, 3), ratio(ALPHA_CAP, 1), 1 + a(), 1 + P_SPAN + a())
}

fn lp_high_vorticity(base_q: RatFn) -> GnScaling {
    GnScaling {
        lhs: vec![lebesgue(Field::N, RatFn::from(2), RatFn::from(2))],
        rhs: vec![
            lebesgue(Field::N, base_q, 2 - (3 + 3 * a()) / (2 + 3 * a())),
            grad_power((1 + a()) / 2, 6 / (2 + 3 * a())),
        ],
    }
}

fn lp_low_delta_p(z: RatFn) -> GnScaling {
    GnScaling {
        lhs: vec![lebesgue(Field::N, 6 * p() / (2 * p() + 3 * a()), RatFn::from(2))],
        rhs: vec![
            lebesgue(Field::N, p0(), 2 - z.clone()),
            grad_power((p0() + a()) / 2, 2 * z / (p0() + a())),
        ],
    }
}

/// The full catalog.
pub fn build_ledger() -> Vec<LedgerEntry> {
    let entries = vec![
        // ---------------- energy estimate, small α ----------------
        Entry {
            id: "case-i-low",
            description: "Young/interpolation exponents of the energy estimate for 1/6 < α ≤ 1/3",
            region_text: "1/6 < alpha <= 1/3",
            region: vec![alpha_in(open_closed(q(1, 6), q(1, 3)))],
            expressions: vec![
                expr("1-3a", "1-3α", 1 - 3 * a(), closed_open(q(0, 1), q(2, 3))),
                expr("1-2a", "1-2α", 1 - 2 * a(), open(q(0, 1), q(2, 3))),
                expr("(1-a)/2", "(1-α)/2", (1 - a()) / 2, above(q(0, 1))),
                expr("(6-6a)/(2+3a)", "(6-6α)/(2+3α)", (6 - 6 * a()) / (2 + 3 * a()), closed_open(q(4, 3), q(2, 1))),
                expr("6/(2+6a)", "6/(2+6α)", 6 / (2 + 6 * a()), closed_open(q(3, 2), q(2, 1))),
                expr("2/(2+6a)", "2/(2+6α)", 2 / (2 + 6 * a()), open(q(0, 1), q(2, 1))),
            ],
            gn: None,
            scan: alpha_box(ratio(1, 6), ratio(1, 3)),
        },
        Entry {
            id: "case-i-low-gn-l2",
            description: "‖n‖₂² ≤ C‖n‖₁^{(1+6α)/(2+6α)} ‖∇n^{(1+2α)/2}‖₂^{6/(2+6α)}",
            region_text: "1/6 < alpha <= 1/3",
            region: vec![alpha_in(open_closed(q(1, 6), q(1, 3)))],
            expressions: vec![
                expr("(1+6a)/(2+6a)", "(1+6α)/(2+6α)", (1 + 6 * a()) / (2 + 6 * a()), open(q(0, 1), q(1, 1))),
                expr("6/(2+6a)", "6/(2+6α)", 6 / (2 + 6 * a()), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(l2_gn()),
            scan: alpha_box(ratio(1, 6), ratio(1, 3)),
        },
        Entry {
            id: "case-i-low-gn-2ma",
            description: "‖n‖_{2-α}^{2-α} ≤ C‖n‖₁^{(1+4α)/(2+3α)} ‖∇n^{(1+α)/2}‖₂^{(6-6α)/(2+3α)}",
            region_text: "1/6 < alpha <= 1/3",
            region: vec![alpha_in(open_closed(q(1, 6), q(1, 3)))],
            expressions: vec![
                expr("2-a", "2-α", 2 - a(), open(q(1, 1), q(2, 1))),
                expr("(1+4a)/(2+3a)", "(1+4α)/(2+3α)", (1 + 4 * a()) / (2 + 3 * a()), open(q(0, 1), q(1, 1))),
            ],
            gn: Some(GnScaling {
                lhs: vec![lebesgue(Field::N, 2 - a(), 2 - a())],
                rhs: vec![
                    lebesgue(Field::N, q_one(), (1 + 4 * a()) / (2 + 3 * a())),
                    grad_power((1 + a()) / 2, (6 - 6 * a()) / (2 + 3 * a())),
                ],
            }),
            scan: alpha_box(ratio(1, 6), ratio(1, 3)),
        },
        Entry {
            id: "case-i-low-gn-65",
            description: "‖n‖_{6/5}² ≤ C‖n‖₁^{(3+10α)/(2+6α)} ‖∇n^{(1+2α)/2}‖₂^{2/(2+6α)}",
            region_text: "1/6 < alpha <= 1/3",
            region: vec![alpha_in(open_closed(q(1, 6), q(1, 3)))],
            expressions: vec![
                expr("6/5", "6/5", q(6, 5), open(q(1, 1), 3 + 6 * a())),
                expr("2/(2+6a)", "2/(2+6α)", 2 / (2 + 6 * a()), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(GnScaling {
                lhs: vec![lebesgue(Field::N, q(6, 5), RatFn::from(2))],
                rhs: vec![
                    lebesgue(Field::N, q_one(), (5 * (1 + 2 * a()) - 2) / (2 + 6 * a())),
                    grad_power((1 + 2 * a()) / 2, 2 / (2 + 6 * a())),
                ],
            }),
            scan: alpha_box(ratio(1, 6), ratio(1, 3)),
        },
        // ---------------- energy estimate, other α ----------------
        Entry {
            id: "case-i-mid",
            description: "energy estimate exponents for 1/3 < α ≤ 1",
            region_text: "1/3 < alpha <= 1",
            region: vec![alpha_in(open_closed(q(1, 3), q(1, 1)))],
            expressions: vec![
                expr("1-a", "1-α", 1 - a(), closed_open(q(0, 1), q(2, 3))),
                expr("6/(2+6a)", "6/(2+6α)", 6 / (2 + 6 * a()), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(l2_gn()),
            scan: alpha_box(ratio(1, 3), ratio(1, 1)),
        },
        Entry {
            id: "case-i-high",
            description: "‖n‖_{1+α}^{1+α} ≤ C‖n‖₁^{(2+2α)/(2+3α)} ‖∇n^{(1+α)/2}‖₂^{6α/(2+3α)} for α > 1",
            region_text: "alpha > 1",
            region: vec![alpha_in(above(q(1, 1)))],
            expressions: vec![
                expr("(1+a)/2", "(1+α)/2", (1 + a()) / 2, above(q(1, 1))),
                expr("6a/(2+3a)", "6α/(2+3α)", 6 * a() / (2 + 3 * a()), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(GnScaling {
                lhs: vec![lebesgue(Field::N, 1 + a(), 1 + a())],
                rhs: vec![
                    lebesgue(Field::N, q_one(), (2 + 2 * a()) / (2 + 3 * a())),
                    grad_power((1 + a()) / 2, 6 * a() / (2 + 3 * a())),
                ],
            }),
            scan: alpha_box(ratio(1, 1), ratio(ALPHA_CAP, 1)),
        },
        Entry {
            id: "case-iii-young",
            description: "Young exponent n^{1-α} ≤ C + εn for 0 < α ≤ 1/6",
            region_text: "0 < alpha <= 1/6",
            region: vec![alpha_in(open_closed(q(0, 1), q(1, 6)))],
            expressions: vec![expr("1-a", "1-α", 1 - a(), open(q(0, 1), q(1, 1)))],
            gn: None,
            scan: alpha_box(ratio(0, 1), ratio(1, 6)),
        },
        // ---------------- higher integrability, α > 1/3 ----------------
        Entry {
            id: "lp-high-delta-p",
            description: "‖n‖_{6p/(2p+3α)}² ≤ C‖n‖₁^{2-X} ‖∇n^{(1+2α)/2}‖₂^{2-δ_p}, α > 1/3",
            region_text: "alpha > 1/3, p > 1+alpha",
            region: vec![alpha_in(above(q(1, 3))), p_in(above(1 + a()))],
            expressions: vec![
                expr("6p/(2p+3a)", "6p/(2p+3α)", 6 * p() / (2 * p() + 3 * a()), open(q(1, 1), 3 + 6 * a())),
                expr("X/2", "(1+2α)(4p-3α)/(4p(1+3α))", high_x() / 2, open(q(0, 1), q(1, 1))),
                expr("delta_p", "2-4/(1+3α)+3α/(p(1+3α))", 2 - 4 / (1 + 3 * a()) + 3 * a() / (p() * (1 + 3 * a())), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(GnScaling {
                lhs: vec![lebesgue(Field::N, 6 * p() / (2 * p() + 3 * a()), RatFn::from(2))],
                rhs: vec![
                    lebesgue(Field::N, q_one(), 2 - high_x()),
                    grad_power((1 + 2 * a()) / 2, 4 / (1 + 3 * a()) - 3 * a() / (p() * (1 + 3 * a()))),
                ],
            }),
            scan: high_box(),
        },
        Entry {
            id: "lp-high-delta-p-prime",
            description: "‖n‖_{2p/(p+α)}² ≤ C‖n‖₁^{2-Y} ‖∇n^{(1+2α)/2}‖₂^{2-δ′_p}, α > 1/3",
            region_text: "alpha > 1/3, p > 1+alpha",
            region: vec![alpha_in(above(q(1, 3))), p_in(above(1 + a()))],
            expressions: vec![
                expr("2p/(p+a)", "2p/(p+α)", 2 * p() / (p() + a()), open(q(1, 1), 3 + 6 * a())),
                expr("Y/2", "3(1+2α)(p-α)/(4p(1+3α))", high_y() / 2, open(q(0, 1), q(1, 1))),
                expr("delta_p_prime", "(-1+6α)/(1+3α)+3α/(p(1+3α))", (6 * a() - 1) / (1 + 3 * a()) + 3 * a() / (p() * (1 + 3 * a())), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(GnScaling {
                lhs: vec![lebesgue(Field::N, 2 * p() / (p() + a()), RatFn::from(2))],
                rhs: vec![
                    lebesgue(Field::N, q_one(), 2 - high_y()),
                    grad_power((1 + 2 * a()) / 2, 3 / (1 + 3 * a()) - 3 * a() / (p() * (1 + 3 * a()))),
                ],
            }),
            scan: high_box(),
        },
        Entry {
            id: "lp-high-vorticity",
            description: "‖n‖₂² ≤ C‖n‖₁^{2-(3+3α)/(2+3α)} ‖∇n^{(1+α)/2}‖₂^{6/(2+3α)}, α > 1/3 (homogeneous form)",
            region_text: "alpha > 1/3",
            region: vec![alpha_in(above(q(1, 3)))],
            expressions: vec![
                expr("6/(2+3a)", "6/(2+3α)", 6 / (2 + 3 * a()), open(q(0, 1), q(2, 1))),
                expr("(3+3a)/(2+3a)", "(3+3α)/(2+3α)", (3 + 3 * a()) / (2 + 3 * a()), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(lp_high_vorticity(q_one())),
            scan: alpha_box(ratio(1, 3), ratio(ALPHA_CAP, 1)),
        },
        Entry {
            id: "moser-interp",
            description: "‖n‖_{p-α}^{p-α} ≤ ‖n‖₁^{α/(p-1)} ‖n‖_p^{p(p-α-1)/(p-1)}",
            region_text: "alpha > 0, p > 1+alpha",
            region: vec![alpha_in(above(q(0, 1))), p_in(above(1 + a()))],
            expressions: vec![
                expr("p-a", "p-α", p() - a(), open(q(1, 1), p())),
                expr("a/(p-1)", "α/(p-1)", a() / (p() - 1), open(q(0, 1), q(1, 1))),
            ],
            gn: Some(GnScaling {
                lhs: vec![lebesgue(Field::N, p() - a(), p() - a())],
                rhs: vec![
                    lebesgue(Field::N, q_one(), a() / (p() - 1)),
                    lebesgue(Field::N, p(), p() * (p() - a() - 1) / (p() - 1)),
                ],
            }),
            scan: ap_box(ratio(0, 1), ratio(ALPHA_CAP, 1), 1 + a(), 1 + P_SPAN + a()),
        },
        // ---------------- higher integrability, 1/8 < α ≤ 1/3 ----------------
        Entry {
            id: "moser-window",
            description: "the p range 1+α < p < 1+4α and its upper window",
            region_text: "1/8 < alpha <= 1/3, 1+alpha < p < 1+4alpha",
            region: vec![low_alpha(), low_p_range()],
            expressions: vec![
                expr("p", "p", p(), open(1 + a(), 1 + 4 * a())),
                expr("(2+11a)/3", "(2+11α)/3", (2 + 11 * a()) / 3, open(1 + a(), 1 + 4 * a())),
            ],
            gn: None,
            scan: low_box(),
        },
        Entry {
            id: "lp-low-r1",
            description: "embedding ranges for r₁ = (6+6α)/(5+14α-3p)",
            region_text: "1/8 < alpha <= 1/3, 1+alpha < p < 1+4alpha",
            region: vec![low_alpha(), low_p_range()],
            expressions: vec![
                expr("r1", "(6+6α)/(5+14α-3p)", r1(), open(1 + a(), 3 * p() + 3 * a())),
                expr("6r1/(6+r1)", "6r₁/(6+r₁)", 6 * r1() / (6 + r1()), open(q(1, 1), 3 * p() + 3 * a())),
                expr("r1 (unit window)", "r₁", r1(), closed_open(q(1, 1), q(3, 1))),
            ],
            gn: None,
            scan: low_box(),
        },
        Entry {
            id: "lp-low-r2",
            description: "embedding ranges for r₂ = p-α+1",
            region_text: "1/8 < alpha <= 1/3, 1+alpha < p < 1+4alpha",
            region: vec![low_alpha(), low_p_range()],
            expressions: vec![
                expr("r2", "p-α+1", r2(), open(1 + a(), 3 * p() + 3 * a())),
                expr("6r2/(6+r2)", "6r₂/(6+r₂)", 6 * r2() / (6 + r2()), open(q(1, 1), 3 * p() + 3 * a())),
                expr("r2 (sobolev window)", "r₂", r2(), open(q(2, 1), q(6, 1))),
            ],
            gn: None,
            scan: low_box(),
        },
        Entry {
            id: "lp-low-theta1",
            description: "‖n‖_{r₁}² ≤ C‖n‖_{1+α}^{2(1-θ₁)} ‖∇n^{(p+α)/2}‖₂^{δ₁}",
            region_text: "1/8 < alpha <= 1/3, 1+alpha < p < 1+4alpha",
            region: vec![low_alpha(), low_p_range()],
            expressions: vec![
                expr("theta1", "(p+α)(3p-14α+1)/(2(3p+2α-1))", theta1(), open(q(0, 1), q(1, 1))),
                expr("delta1", "4θ₁/(p+α)", 4 * theta1() / (p() + a()), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(moser_gn(r1(), RatFn::from(2), 1 + a(), theta1(), 4 * theta1() / (p() + a()))),
            scan: low_box(),
        },
        Entry {
            id: "lp-low-theta2",
            description: "‖n‖_{6r₁/(6+r₁)}² ≤ C‖n‖₁^{2(1-θ₂)} ‖∇n^{(p+α)/2}‖₂^{δ₂}",
            region_text: "1/8 < alpha <= 1/3, 1+alpha < p < 1+4alpha",
            region: vec![low_alpha(), low_p_range()],
            expressions: vec![
                expr("theta2", "3(p+α)(p-3α)/(2(1+α)(3p+3α-1))", theta2(), open(q(0, 1), q(1, 1))),
                expr("delta2", "4θ₂/(p+α)", 4 * theta2() / (p() + a()), open(q(0, 1), q(2, 1))),
                expr("(p-3a)/(1+a)", "(p-3α)/(1+α)", (p() - 3 * a()) / (1 + a()), open(q(0, 1), q(1, 1))),
                expr("(1+4a-p)/(1+a)", "(1+4α-p)/(1+α)", (1 + 4 * a() - p()) / (1 + a()), open(q(0, 1), q(1, 1))),
            ],
            gn: Some(moser_gn(6 * r1() / (6 + r1()), RatFn::from(2), q_one(), theta2(), 4 * theta2() / (p() + a()))),
            scan: low_box(),
        },
        Entry {
            id: "lp-low-theta3",
            description: "‖n‖_{r₂}^{r₂} ≤ C‖n‖_{1+α}^{r₂(1-θ₃)} ‖∇n^{(p+α)/2}‖₂^{δ₃}",
            region_text: "1/8 < alpha <= 1/3, 1+alpha < p < 1+4alpha",
            region: vec![low_alpha(), low_p_range()],
            expressions: vec![
                expr("theta3", "3(p+α)(r₂-1-α)/(r₂(3p+2α-1))", theta3(), open(q(0, 1), q(1, 1))),
                expr("delta3", "2r₂θ₃/(p+α)", 2 * r2() * theta3() / (p() + a()), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(moser_gn(r2(), r2(), 1 + a(), theta3(), 2 * r2() * theta3() / (p() + a()))),
            scan: low_box(),
        },
        Entry {
            id: "lp-low-theta4",
            description: "‖n‖_{6r₂/(6+r₂)}^{r₂} ≤ C‖n‖₁^{r₂(1-θ₄)} ‖∇n^{(p+α)/2}‖₂^{δ₄}",
            region_text: "1/8 < alpha <= 1/3, 1+alpha < p < 1+4alpha",
            region: vec![low_alpha(), low_p_range()],
            expressions: vec![
                expr("theta4", "(p+α)(5r₂-6)/(r₂(6p+6α-2))", theta4(), open(q(0, 1), q(1, 1))),
                expr("delta4", "2r₂θ₄/(p+α)", 2 * r2() * theta4() / (p() + a()), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(moser_gn(6 * r2() / (6 + r2()), r2(), q_one(), theta4(), 2 * r2() * theta4() / (p() + a()))),
            scan: low_box(),
        },
        Entry {
            id: "lp-low-theta5",
            description: "‖∇c‖_{r₂}^{r₂} ≤ C‖∇c‖₂^{r₂(1-θ₅)} ‖D²c‖₂^{δ₅}",
            region_text: "1/8 < alpha <= 1/3, 1+alpha < p < 1+4alpha",
            region: vec![low_alpha(), low_p_range()],
            expressions: vec![
                expr("theta5", "3(p-α-1)/(2r₂)", theta5(), open(q(0, 1), q(1, 1))),
                expr("delta5", "r₂θ₅", r2() * theta5(), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(GnScaling {
                lhs: vec![NormFactor {
                    field: Field::C,
                    order: 1,
                    s: q_one(),
                    q: r2(),
                    k: r2(),
                }],
                rhs: vec![
                    NormFactor {
                        field: Field::C,
                        order: 1,
                        s: q_one(),
                        q: RatFn::from(2),
                        k: r2() * (1 - theta5()),
                    },
                    NormFactor {
                        field: Field::C,
                        order: 2,
                        s: q_one(),
                        q: RatFn::from(2),
                        k: r2() * theta5(),
                    },
                ],
            }),
            scan: low_box(),
        },
        Entry {
            id: "r1-sobolev-window",
            description: "2 ≤ r₁ ≤ 6 on the upper window of p",
            region_text: "1/8 < alpha <= 1/3, (2+11alpha)/3 < p < 1+4alpha",
            region: vec![low_alpha(), p_in(open((2 + 11 * a()) / 3, 1 + 4 * a()))],
            expressions: vec![expr("r1", "(6+6α)/(5+14α-3p)", r1(), closed(q(2, 1), q(6, 1)))],
            gn: None,
            scan: ap_box(ratio(1, 8), ratio(1, 3), (2 + 11 * a()) / 3, 1 + 4 * a()),
        },
        Entry {
            id: "p0-window",
            description: "p₀ = 3/2 - 3α/4 lies in [1, 1+4α)",
            region_text: "1/8 < alpha <= 1/3",
            region: vec![low_alpha()],
            expressions: vec![expr("p0", "3/2-3α/4", p0(), closed_open(q(1, 1), 1 + 4 * a()))],
            gn: None,
            scan: alpha_box(ratio(1, 8), ratio(1, 3)),
        },
        Entry {
            id: "lp-low-delta-p",
            description: "‖n‖_{6p/(2p+3α)}² ≤ C‖n‖_{p₀}^{2-Z} ‖∇n^{(p₀+α)/2}‖₂^{2-δ_p}, 1/8 < α ≤ 1/3 (homogeneous form)",
            region_text: "1/8 < alpha <= 1/3, p > 1+alpha",
            region: vec![low_alpha(), p_in(above(1 + a()))],
            expressions: vec![
                expr("6p/(2p+3a)", "6p/(2p+3α)", 6 * p() / (2 * p() + 3 * a()), open(p0(), 3 * p0() + 3 * a())),
                expr("Z/2", "(p₀+α)(6p-2pp₀-3αp₀)/(2p(2p₀+3α))", low_z() / 2, open(q(0, 1), q(1, 1))),
                expr("delta_p", "2-(12-4p₀)/(2p₀+3α)+6αp₀/(p(2p₀+3α))", 2 - 2 * low_z() / (p0() + a()), open(q(0, 1), q(2, 1))),
            ],
            gn: Some(lp_low_delta_p(low_z())),
            scan: ap_box(ratio(1, 8), ratio(1, 3), 1 + a(), 1 + P_SPAN + a()),
        },
        Entry {
            id: "lp-low-delta-p-prime",
            description: "‖n‖_{2p/(p+α)}² ≤ C‖n‖_{1+α}^{2-Z′} ‖∇n^{(1+2α)/2}‖₂^{2-δ′_p}, 1/8 < α ≤ 1/3",
            region_text: "1/8 < alpha <= 1/3, p > 1+alpha",
            region: vec![low_alpha(), p_in(above(1 + a()))],
            expressions: vec![
                expr("a(1+a)/(1-a)", "α(1+α)/(1-α)", a() * (1 + a()) / (1 - a()), open(q(0, 1), 1 + a())),
                expr("Z'/2", "3(1+2α)(p-αp-α-α²)/(2p(2+5α))", low_z_prime() / 2, open(q(0, 1), q(1, 1))),
                expr(
                    "delta_p_prime",
                    "(-2+16α)/(2+5α)+(6α+6α²)/(p(2+5α))",
                    (16 * a() - 2) / (2 + 5 * a()) + (6 * a() + 6 * a() * a()) / (p() * (2 + 5 * a())),
                    open(q(0, 1), q(2, 1)),
                ),
            ],
            gn: Some(GnScaling {
                lhs: vec![lebesgue(Field::N, 2 * p() / (p() + a()), RatFn::from(2))],
                rhs: vec![
                    lebesgue(Field::N, 1 + a(), 2 - low_z_prime()),
                    grad_power((1 + 2 * a()) / 2, 2 * low_z_prime() / (1 + 2 * a())),
                ],
            }),
            scan: ap_box(ratio(1, 8), ratio(1, 3), 1 + a(), 1 + P_SPAN + a()),
        },
        Entry {
            id: "lp-low-vorticity",
            description: "‖n‖₂² ≤ C‖n‖_{1+α}^{2-3(1+2α)(1-α)/(2+5α)} ‖∇n^{(1+2α)/2}‖₂^{(6-6α)/(2+5α)}",
            region_text: "1/8 < alpha <= 1/3",
            region: vec![low_alpha()],
            expressions: vec![expr("(6-6a)/(2+5a)", "(6-6α)/(2+5α)", (6 - 6 * a()) / (2 + 5 * a()), open(q(0, 1), q(2, 1)))],
            gn: Some(GnScaling {
                lhs: vec![lebesgue(Field::N, RatFn::from(2), RatFn::from(2))],
                rhs: vec![
                    lebesgue(Field::N, 1 + a(), 2 - 3 * (1 + 2 * a()) * (1 - a()) / (2 + 5 * a())),
                    grad_power((1 + 2 * a()) / 2, (6 - 6 * a()) / (2 + 5 * a())),
                ],
            }),
            scan: alpha_box(ratio(1, 8), ratio(1, 3)),
        },
    ];
    entries.into_iter().map(LedgerEntry::from).collect()
}

/// The printed (non-homogeneous) form of an entry whose catalog version was
/// corrected, or `None` if the entry is stored as printed.
pub fn printed_form(id: &str) -> Option<LedgerEntry> {
    let mut entry = build_ledger().into_iter().find(|e| e.id == id)?;
    match id {
        // Printed with ‖n‖_{1+α} in place of ‖n‖₁.
        "lp-high-vorticity" => {
            entry.gn_scaling = Some(lp_high_vorticity(1 + a()));
        }
        // Printed with 2(2p₀+3α) in place of p(2p₀+3α) in the denominator.
        "lp-low-delta-p" => {
            let printed = (p0() + a()) * (6 * p() - 2 * p() * p0() - 3 * a() * p0()) / (2 * (2 * p0() + 3 * a()));
            let corrected_grad = 2 * low_z() / (p0() + a());
            entry.gn_scaling = Some(GnScaling {
                lhs: vec![lebesgue(Field::N, 6 * p() / (2 * p() + 3 * a()), RatFn::from(2))],
                rhs: vec![
                    lebesgue(Field::N, p0(), 2 - printed),
                    grad_power((p0() + a()) / 2, corrected_grad),
                ],
            });
        }
        _ => return None,
    }
    entry.id = format!("{id}-printed");
    Some(entry)
}

/// `case-i-low-gn-l2` with the `‖n‖₁` exponent perturbed by 1/100.
pub fn corrupted_entry() -> LedgerEntry {
    let mut entry = build_ledger().into_iter().find(|e| e.id == "case-i-low-gn-l2").expect("catalog entry");
    if let Some(gn) = entry.gn_scaling.as_mut() {
        gn.rhs[0].k = &gn.rhs[0].k + &q(1, 100);
    }
    entry.id = "case-i-low-gn-l2-corrupted".into();
    entry
}
