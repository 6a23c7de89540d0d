//! Truncated series in u = q1^{1/m1} and v = q2^{1/m2}.
//!
//! Truncation is on the u-exponent only: terms with u-exponent above `order`
//! are discarded. A term carrying no u cannot be truncated, so operations
//! that would produce unbounded pure-v towers are rejected.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::cyclotomic::CycNumber;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FracSeries {
    /// (m1, m2): u = q1^{1/m1}, v = q2^{1/m2}
    base: (u32, u32),
    order: u32,
    terms: BTreeMap<(u32, u32), CycNumber>,
}

impl FracSeries {
    pub fn zero(base: (u32, u32), order: u32) -> Self {
        FracSeries { base, order, terms: BTreeMap::new() }
    }

    pub fn constant(base: (u32, u32), order: u32, c: CycNumber) -> Self {
        Self::monomial(base, order, c, 0, 0)
    }

    pub fn one(base: (u32, u32), order: u32) -> Self {
        Self::constant(base, order, CycNumber::one())
    }

    /// c * u^a v^b
    pub fn monomial(base: (u32, u32), order: u32, c: CycNumber, a: u32, b: u32) -> Self {
        let mut s = Self::zero(base, order);
        if a <= order && !c.is_zero() {
            s.terms.insert((a, b), c);
        }
        s
    }

    /// Base for the local model of rank r: (r+1, r+2).
    pub fn local_base(r: u32) -> (u32, u32) {
        (r + 1, r + 2)
    }

    pub fn u(base: (u32, u32), order: u32) -> Self {
        Self::monomial(base, order, CycNumber::one(), 1, 0)
    }

    pub fn v(base: (u32, u32), order: u32) -> Self {
        Self::monomial(base, order, CycNumber::one(), 0, 1)
    }

    pub fn q1(base: (u32, u32), order: u32) -> Self {
        Self::monomial(base, order, CycNumber::one(), base.0, 0)
    }

    pub fn q2(base: (u32, u32), order: u32) -> Self {
        Self::monomial(base, order, CycNumber::one(), 0, base.1)
    }

    pub fn base(&self) -> (u32, u32) {
        self.base
    }

    pub fn base_exponents(&self) -> (Rational, Rational) {
        (
            Rational::new(1.into(), (self.base.0 as i64).into()),
            Rational::new(1.into(), (self.base.1 as i64).into()),
        )
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), CycNumber> {
        &self.terms
    }

    pub fn coeff(&self, a: u32, b: u32) -> CycNumber {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(CycNumber::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent pair, ordered by u-exponent then v-exponent.
    pub fn leading_exponent(&self) -> Option<(u32, u32)> {
        self.terms.keys().next().copied()
    }

    fn combine_meta(&self, o: &Self) -> ((u32, u32), u32) {
        assert_eq!(self.base, o.base, "fractional series with different bases");
        (self.base, self.order.min(o.order))
    }

    fn insert_add(terms: &mut BTreeMap<(u32, u32), CycNumber>, k: (u32, u32), c: CycNumber) {
        let v = match terms.get(&k) {
            Some(x) => x + &c,
            None => c,
        };
        if v.is_zero() {
            terms.remove(&k);
        } else {
            terms.insert(k, v);
        }
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        let mut s = Self::zero(self.base, self.order);
        if !c.is_zero() {
            s.terms = self.terms.iter().map(|(k, x)| (*k, x * c)).collect();
        }
        s
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.base, self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// (self)^alpha by the binomial series; the constant term must be 1.
    pub fn binomial_power(&self, alpha: &Rational) -> Result<Self> {
        if !self.coeff(0, 0).is_one() {
            return Err(Error::InvalidArgument("binomial_power needs constant term 1".into()));
        }
        let mut g = self.clone();
        g.terms.remove(&(0, 0));
        if g.terms.keys().any(|(a, _)| *a == 0) {
            return Err(Error::InvalidArgument("binomial_power: pure q2 terms cannot be truncated".into()));
        }
        let mut acc = Self::one(self.base, self.order);
        let mut gn = Self::one(self.base, self.order);
        let mut binom = Rational::one();
        for n in 1..=self.order {
            let n_q = Rational::from_integer((n as i64).into());
            binom = binom * (alpha - &n_q + Rational::one()) / &n_q;
            gn = &gn * &g;
            if gn.is_zero() {
                break;
            }
            acc = &acc + &gn.scale(&CycNumber::from_rational(binom.clone()));
        }
        Ok(acc)
    }
}

impl<'a> Add<&'a FracSeries> for &'a FracSeries {
    type Output = FracSeries;
    fn add(self, o: &FracSeries) -> FracSeries {
        let (base, order) = self.combine_meta(o);
        let mut s = FracSeries::zero(base, order);
        for (k, c) in self.terms.iter().chain(o.terms.iter()) {
            if k.0 <= order {
                FracSeries::insert_add(&mut s.terms, *k, c.clone());
            }
        }
        s
    }
}

impl<'a> Sub<&'a FracSeries> for &'a FracSeries {
    type Output = FracSeries;
    fn sub(self, o: &FracSeries) -> FracSeries {
        self + &(-o)
    }
}

impl<'a> Mul<&'a FracSeries> for &'a FracSeries {
    type Output = FracSeries;
    fn mul(self, o: &FracSeries) -> FracSeries {
        let (base, order) = self.combine_meta(o);
        let mut s = FracSeries::zero(base, order);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                if a1 + a2 <= order {
                    FracSeries::insert_add(&mut s.terms, (a1 + a2, b1 + b2), c1 * c2);
                }
            }
        }
        s
    }
}

impl Neg for &FracSeries {
    type Output = FracSeries;
    fn neg(self) -> FracSeries {
        FracSeries { base: self.base, order: self.order, terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}
