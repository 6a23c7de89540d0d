//! Finite Laurent polynomials in a second variable (the equivariant weight
//! lambda, or q2 in the quantum ring) with rational-function coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cyclotomic::{forward_owned, CycNumber};
use super::ratfunc::{IntegrationMode, RatFunc};
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct LaurentRat {
    terms: BTreeMap<i32, RatFunc>,
}

/// Values of the equivariant pipeline: Laurent polynomials in lambda.
pub type EquivScalar = LaurentRat;

impl LaurentRat {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ratfunc(RatFunc::one())
    }

    pub fn from_ratfunc(f: RatFunc) -> Self {
        Self::monomial(0, f)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ratfunc(RatFunc::from_int(n))
    }

    pub fn constant(c: CycNumber) -> Self {
        Self::from_ratfunc(RatFunc::constant(c))
    }

    /// f * lambda^e
    pub fn monomial(e: i32, f: RatFunc) -> Self {
        let mut terms = BTreeMap::new();
        if !f.is_zero() {
            terms.insert(e, f);
        }
        LaurentRat { terms }
    }

    /// The variable itself.
    pub fn lambda() -> Self {
        Self::monomial(1, RatFunc::one())
    }

    pub fn terms(&self) -> &BTreeMap<i32, RatFunc> {
        &self.terms
    }

    pub fn coeff(&self, e: i32) -> RatFunc {
        self.terms.get(&e).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exp(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// Single-term value as (exponent, coefficient).
    pub fn as_monomial(&self) -> Option<(i32, &RatFunc)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().map(|(e, f)| (*e, f)).unwrap())
    }

    pub fn scale(&self, f: &RatFunc) -> Self {
        if f.is_zero() {
            return Self::zero();
        }
        LaurentRat { terms: self.terms.iter().map(|(e, g)| (*e, g * f)).collect() }
    }

    pub fn scale_cyc(&self, c: &CycNumber) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentRat { terms: self.terms.iter().map(|(e, g)| (*e, g.scale(c))).collect() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale_cyc(&CycNumber::from_rational(q.clone()))
    }

    /// Multiply by lambda^k.
    pub fn shift(&self, k: i32) -> Self {
        LaurentRat { terms: self.terms.iter().map(|(e, g)| (e + k, g.clone())).collect() }
    }

    /// Inverse of a single-term value.
    pub fn inverse(&self) -> Result<Self> {
        match self.as_monomial() {
            Some((e, f)) => Ok(Self::monomial(-e, f.inv())),
            None if self.is_zero() => Err(Error::DivisionByZero),
            None => Err(Error::InvalidArgument("only single-term Laurent values are invertible".into())),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs(&self, f: impl Fn(&RatFunc) -> RatFunc) -> Self {
        let terms = self.terms.iter().map(|(e, g)| (*e, f(g))).filter(|(_, g)| !g.is_zero()).collect();
        LaurentRat { terms }
    }

    pub fn try_map_coeffs(&self, f: impl Fn(&RatFunc) -> Result<RatFunc>) -> Result<Self> {
        let mut terms = BTreeMap::new();
        for (e, g) in &self.terms {
            let v = f(g)?;
            if !v.is_zero() {
                terms.insert(*e, v);
            }
        }
        Ok(LaurentRat { terms })
    }

    /// Coefficientwise q d/dq.
    pub fn delta(&self, ramification: u32) -> Self {
        self.map_coeffs(|g| g.delta(ramification))
    }

    pub fn integrate_in_t(&self, ramification: u32, mode: IntegrationMode) -> Result<Self> {
        self.try_map_coeffs(|g| g.integrate_in_t(ramification, mode))
    }

    /// Limit lambda -> 0; any surviving negative power is an error.
    pub fn non_equivariant_limit(&self) -> Result<RatFunc> {
        if let Some(e) = self.min_exp().filter(|e| *e < 0) {
            return Err(Error::SurvivingNegativePower(e));
        }
        Ok(self.coeff(0))
    }
}

impl<'a> Add<&'a LaurentRat> for &'a LaurentRat {
    type Output = LaurentRat;
    fn add(self, o: &LaurentRat) -> LaurentRat {
        let mut terms = self.terms.clone();
        for (e, g) in &o.terms {
            let v = match terms.get(e) {
                Some(f) => f + g,
                None => g.clone(),
            };
            if v.is_zero() {
                terms.remove(e);
            } else {
                terms.insert(*e, v);
            }
        }
        LaurentRat { terms }
    }
}

impl<'a> Sub<&'a LaurentRat> for &'a LaurentRat {
    type Output = LaurentRat;
    fn sub(self, o: &LaurentRat) -> LaurentRat {
        self + &(-o)
    }
}

impl<'a> Mul<&'a LaurentRat> for &'a LaurentRat {
    type Output = LaurentRat;
    fn mul(self, o: &LaurentRat) -> LaurentRat {
        let mut acc: BTreeMap<i32, RatFunc> = BTreeMap::new();
        for (e1, f1) in &self.terms {
            for (e2, f2) in &o.terms {
                let p = f1 * f2;
                let slot = acc.entry(e1 + e2).or_insert_with(RatFunc::zero);
                *slot = &*slot + &p;
            }
        }
        acc.retain(|_, f| !f.is_zero());
        LaurentRat { terms: acc }
    }
}

impl Neg for &LaurentRat {
    type Output = LaurentRat;
    fn neg(self) -> LaurentRat {
        LaurentRat { terms: self.terms.iter().map(|(e, g)| (*e, -g)).collect() }
    }
}

impl Neg for LaurentRat {
    type Output = LaurentRat;
    fn neg(self) -> LaurentRat {
        -&self
    }
}

forward_owned!(Add, add, LaurentRat);
forward_owned!(Sub, sub, LaurentRat);
forward_owned!(Mul, mul, LaurentRat);

impl Zero for LaurentRat {
    fn zero() -> Self {
        LaurentRat::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for LaurentRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(e, g)| format!("{{{g}}}*L^{e}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l() -> LaurentRat {
        LaurentRat::lambda()
    }

    #[test]
    fn arithmetic() {
        let a = &l() + &LaurentRat::from_int(1);
        let b = &l() - &LaurentRat::from_int(1);
        let p = &a * &b;
        assert_eq!(p, &l().pow(2) - &LaurentRat::one());
        assert!((&a - &a).is_zero());
        assert_eq!(l().inverse().unwrap(), LaurentRat::monomial(-1, RatFunc::one()));
        assert!(a.inverse().is_err());
        assert!(LaurentRat::zero().inverse().is_err());
    }

    #[test]
    fn limit() {
        let a = &l() + &LaurentRat::from_int(3);
        assert_eq!(a.non_equivariant_limit().unwrap(), RatFunc::from_int(3));
        let b = &a + &l().inverse().unwrap();
        assert_eq!(b.non_equivariant_limit(), Err(Error::SurvivingNegativePower(-1)));
    }
}
