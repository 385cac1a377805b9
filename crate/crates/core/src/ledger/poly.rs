//! Exact bivariate polynomials and rational functions in `(α, p)`.

use std::collections::BTreeMap;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};

/// `∑ c_{ij} α^i p^j` with no zero coefficients stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        Poly { terms }
    }

    pub fn monomial(c: BigRational, alpha_pow: u32, p_pow: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((alpha_pow, p_pow), c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Whether the polynomial involves `p`.
    pub fn has_p(&self) -> bool {
        self.terms.keys().any(|&(_, j)| j > 0)
    }

    fn accumulate(&mut self, key: (u32, u32), c: BigRational) {
        let slot = self.terms.entry(key).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn eval(&self, alpha: &BigRational, p: &BigRational) -> BigRational {
        let max_i = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_j = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let powers = |x: &BigRational, n: u32| {
            let mut v = Vec::with_capacity(n as usize + 1);
            v.push(BigRational::one());
            for k in 0..n as usize {
                let next = &v[k] * x;
                v.push(next);
            }
            v
        };
        let ap = powers(alpha, max_i);
        let pp = if max_j > 0 { powers(p, max_j) } else { vec![BigRational::one()] };
        let mut acc = BigRational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * &ap[i as usize] * &pp[j as usize];
        }
        acc
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.accumulate(*k, c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.accumulate((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }
}

/// `num / den` with `den` not identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl RatFn {
    pub fn constant(c: BigRational) -> Self {
        RatFn {
            num: Poly::constant(c),
            den: Poly::constant(BigRational::one()),
        }
    }

    pub fn from_poly(num: Poly) -> Self {
        RatFn {
            num,
            den: Poly::constant(BigRational::one()),
        }
    }

    /// The variable `α`.
    pub fn alpha() -> Self {
        Self::from_poly(Poly::monomial(BigRational::one(), 1, 0))
    }

    /// The variable `p`.
    pub fn p() -> Self {
        Self::from_poly(Poly::monomial(BigRational::one(), 0, 1))
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    /// Identically zero as a rational function.
    pub fn is_identically_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn has_p(&self) -> bool {
        self.num.has_p() || self.den.has_p()
    }

    /// Exact value; `what` names the expression in the error.
    pub fn eval(&self, alpha: &BigRational, p: &BigRational, what: &str) -> Result<BigRational> {
        let d = self.den.eval(alpha, p);
        if d.is_zero() {
            return Err(Error::ZeroDenominator(what.to_string()));
        }
        Ok(self.num.eval(alpha, p) / d)
    }
}

impl From<i64> for RatFn {
    fn from(v: i64) -> Self {
        RatFn::constant(rational(v, 1))
    }
}

impl From<BigRational> for RatFn {
    fn from(v: BigRational) -> Self {
        RatFn::constant(v)
    }
}

impl Add for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.den == rhs.den {
            return RatFn {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            };
        }
        RatFn {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        RatFn {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
    }
}

impl Div for &RatFn {
    type Output = RatFn;
    /// Panics on an identically zero divisor: catalog expressions are fixed.
    fn div(self, rhs: &RatFn) -> RatFn {
        assert!(!rhs.num.is_zero(), "division by the zero rational function");
        RatFn {
            num: &self.num * &rhs.den,
            den: &self.den * &rhs.num,
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn { (&self).$m(&rhs) }
        }
        impl $tr<&RatFn> for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: &RatFn) -> RatFn { (&self).$m(rhs) }
        }
        impl $tr<RatFn> for &RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn { self.$m(&rhs) }
        }
        impl $tr<i64> for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: i64) -> RatFn { (&self).$m(&RatFn::from(rhs)) }
        }
        impl $tr<i64> for &RatFn {
            type Output = RatFn;
            fn $m(self, rhs: i64) -> RatFn { self.$m(&RatFn::from(rhs)) }
        }
        impl $tr<RatFn> for i64 {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn { (&RatFn::from(self)).$m(&rhs) }
        }
        impl $tr<&RatFn> for i64 {
            type Output = RatFn;
            fn $m(self, rhs: &RatFn) -> RatFn { (&RatFn::from(self)).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}
