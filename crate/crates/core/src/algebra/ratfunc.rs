//! Rational functions in the root-Novikov variable w (w^{r+1} = q).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cyclotomic::{forward_owned, CycNumber};
use super::poly::Poly;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegrationMode {
    /// A nonzero w^0 term is an error.
    Strict,
    /// The w^0 term is dropped.
    DropConstant,
}

/// num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        // strip common powers of w before the general gcd
        let k = num.valuation().unwrap().min(den.valuation().unwrap());
        let (mut num, mut den) = if k > 0 { (num.unshift(k), den.unshift(k)) } else { (num, den) };
        if den.degree() != Some(0) {
            let g = Poly::gcd(&num, &den);
            if g.degree() != Some(0) {
                num = num.divrem(&g).0;
                den = den.divrem(&g).0;
            }
        }
        let (den, lead) = den.monic();
        let num = if lead.is_one() { num } else { num.scale(&lead.inv()) };
        RatFunc { num, den }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::constant(CycNumber::one())
    }

    pub fn constant(c: CycNumber) -> Self {
        RatFunc { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::constant(CycNumber::from_rational(q))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    /// The variable w.
    pub fn var() -> Self {
        Self::monomial(CycNumber::one(), 1)
    }

    /// c * w^e for any integer e.
    pub fn monomial(c: CycNumber, e: i32) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        if e >= 0 {
            RatFunc { num: Poly::monomial(c, e as usize), den: Poly::one() }
        } else {
            RatFunc { num: Poly::constant(c), den: Poly::monomial(CycNumber::one(), (-e) as usize) }
        }
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.degree() == Some(0) && self.num.degree() == Some(0) && self.num.coeff(0).is_one()
    }

    pub fn as_constant(&self) -> Option<CycNumber> {
        if self.num.is_zero() {
            return Some(CycNumber::zero());
        }
        (self.num.degree() == Some(0) && self.den.degree() == Some(0)).then(|| self.num.coeff(0))
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.as_constant().and_then(|c| c.as_rational())
    }

    pub fn checked_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(self.den.clone(), self.num.clone()))
    }

    pub fn inv(&self) -> Self {
        self.checked_inv().expect("inverse of the zero rational function")
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let e = e.unsigned_abs();
        // numerator and denominator stay coprime under powers
        RatFunc { num: base.num.pow(e), den: base.den.pow(e) }
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&CycNumber::from_rational(q.clone()))
    }

    /// q d/dq = (w / ramification) d/dw.
    pub fn delta(&self, ramification: u32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let n = &(&self.num.euler_derivative() * &self.den) - &(&self.num * &self.den.euler_derivative());
        let d = &self.den * &self.den;
        Self::normalize(n, d).scale_rational(&Rational::new(1.into(), (ramification as i64).into()))
    }

    /// Exponent -> coefficient when the denominator is a power of w.
    pub fn laurent_terms(&self) -> Option<BTreeMap<i32, CycNumber>> {
        if !self.den.is_monomial() {
            return None;
        }
        let shift = self.den.degree().unwrap() as i32;
        Some(
            self.num
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i as i32 - shift, c.clone()))
                .collect(),
        )
    }

    pub fn from_laurent_terms(terms: &BTreeMap<i32, CycNumber>) -> Self {
        terms.iter().fold(Self::zero(), |acc, (e, c)| &acc + &Self::monomial(c.clone(), *e))
    }

    /// Inverse of `delta` on Laurent polynomials: w^a -> (ramification / a) w^a.
    pub fn integrate_in_t(&self, ramification: u32, mode: IntegrationMode) -> Result<Self> {
        let terms = self
            .laurent_terms()
            .ok_or_else(|| Error::InvalidArgument("integrate_in_t needs a Laurent polynomial in w".into()))?;
        let mut out = BTreeMap::new();
        for (a, c) in terms {
            if a == 0 {
                if mode == IntegrationMode::Strict {
                    return Err(Error::NonIntegrableConstant(c.to_string()));
                }
                continue;
            }
            out.insert(a, c.scale(&Rational::new((ramification as i64).into(), (a as i64).into())));
        }
        Ok(Self::from_laurent_terms(&out))
    }

    /// Taylor coefficients at w = 0 through w^order.
    pub fn series_expand(&self, order: usize) -> Result<Vec<CycNumber>> {
        let d0 = self.den.coeff(0);
        if d0.is_zero() {
            return Err(Error::Expansion("pole at w = 0".into()));
        }
        let d0_inv = d0.inv();
        let mut out: Vec<CycNumber> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.num.coeff(k);
            for j in 1..=k.min(self.den.degree().unwrap()) {
                acc = &acc - &(&self.den.coeff(j) * &out[k - j]);
            }
            out.push(&acc * &d0_inv);
        }
        Ok(out)
    }

    /// f(1/w)
    pub fn invert_variable(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let dn = self.num.degree().unwrap();
        let dd = self.den.degree().unwrap();
        let n = self.num.reversed(dn);
        let d = self.den.reversed(dd);
        let (n, d) = if dd >= dn { (n.shift(dd - dn), d) } else { (n, d.shift(dn - dd)) };
        Self::normalize(n, d)
    }

    /// f(w^k)
    pub fn compose_power(&self, k: usize) -> Self {
        Self::normalize(self.num.compose_power(k), self.den.compose_power(k))
    }

    /// f(c w)
    pub fn scale_variable(&self, c: &CycNumber) -> Self {
        Self::normalize(self.num.scale_variable(c), self.den.scale_variable(c))
    }

    /// g with f(w) = g(w^k), if it exists.
    pub fn decimate(&self, k: usize) -> Option<Self> {
        Some(RatFunc { num: self.num.decimate(k)?, den: self.den.decimate(k)? })
    }

    pub fn eval(&self, x: &CycNumber) -> Result<CycNumber> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(&self.num.eval(x) / &d)
    }

    /// Value at w = 0, if finite.
    pub fn value_at_zero(&self) -> Option<CycNumber> {
        let d0 = self.den.coeff(0);
        (!d0.is_zero()).then(|| &self.num.coeff(0) / &d0)
    }

    pub fn map_coeffs(&self, f: impl Fn(&CycNumber) -> CycNumber) -> Self {
        Self::normalize(self.num.map_coeffs(&f), self.den.map_coeffs(&f))
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &Self) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::normalize(&self.num + &o.num, self.den.clone());
        }
        let g = Poly::gcd(&self.den, &o.den);
        let a = self.den.divrem(&g).0;
        let b = o.den.divrem(&g).0;
        let num = &(&self.num * &b) + &(&o.num * &a);
        RatFunc::normalize(num, &a * &o.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if let Some(c) = self.as_constant() {
            return o.scale(&c);
        }
        if let Some(c) = o.as_constant() {
            return self.scale(&c);
        }
        // cross-cancel so the product is already reduced
        let g1 = Poly::gcd(&self.num, &o.den);
        let g2 = Poly::gcd(&o.num, &self.den);
        let n = &self.num.divrem(&g1).0 * &o.num.divrem(&g2).0;
        let d = &self.den.divrem(&g2).0 * &o.den.divrem(&g1).0;
        let (d, lead) = d.monic();
        let n = if lead.is_one() { n } else { n.scale(&lead.inv()) };
        RatFunc { num: n, den: d }
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

forward_owned!(Add, add, RatFunc);
forward_owned!(Sub, sub, RatFunc);
forward_owned!(Mul, mul, RatFunc);
forward_owned!(Div, div, RatFunc);

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

fn fmt_poly(p: &Poly, var: &str) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| match k {
            0 => format!("({c})"),
            1 => format!("({c})*{var}"),
            _ => format!("({c})*{var}^{k}"),
        })
        .collect();
    parts.join(" + ")
}

impl RatFunc {
    /// Renders with the given variable name; `Display` uses `w`.
    pub fn display_in(&self, var: &str) -> String {
        if self.den.degree() == Some(0) {
            fmt_poly(&self.num, var)
        } else {
            format!("[{}] / [{}]", fmt_poly(&self.num, var), fmt_poly(&self.den, var))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("w"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use proptest::prelude::*;

    fn c(n: i64) -> CycNumber {
        CycNumber::from_int(n)
    }

    fn w() -> RatFunc {
        RatFunc::var()
    }

    fn poly(cs: &[i64]) -> Poly {
        Poly::from_coeffs(cs.iter().map(|&x| c(x)).collect())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFunc {
        RatFunc::new(poly(n), poly(d)).unwrap()
    }

    // G = q/(1 - q) at r = 1, with w = q
    fn g_r1() -> RatFunc {
        rf(&[0, 1], &[1, -1])
    }

    #[test]
    fn normal_form() {
        let f = rf(&[0, 2, 2], &[0, 0, 4, 4]); // 2w(1+w) / 4w^2(1+w)
        assert_eq!(f.numer(), &Poly::constant(CycNumber::from_rational(rat(1, 2))));
        assert_eq!(f.denom(), &poly(&[0, 1]));
        assert_eq!(f, RatFunc::monomial(CycNumber::from_rational(rat(1, 2)), -1));
        assert!(RatFunc::new(poly(&[1]), Poly::zero()).is_err());
    }

    #[test]
    fn delta_examples() {
        // q^d -> d q^d at r = 0 ramification 1
        let q3 = w().pow(3);
        assert_eq!(q3.delta(1), q3.scale(&c(3)));
        // r=1: delta G = q/(1-q)^2
        assert_eq!(g_r1().delta(1), rf(&[0, 1], &[1, -2, 1]));
        // r=2: w = q^{1/3}
        assert_eq!(w().delta(3), w().scale(&CycNumber::from_rational(rat(1, 3))));
    }

    #[test]
    fn integrate_examples() {
        assert_eq!(w().integrate_in_t(3, IntegrationMode::Strict).unwrap(), w().scale(&c(3)));
        let f = RatFunc::from_int(5);
        assert!(f.integrate_in_t(3, IntegrationMode::Strict).is_err());
        assert!(f.integrate_in_t(3, IntegrationMode::DropConstant).unwrap().is_zero());
        assert!(g_r1().integrate_in_t(1, IntegrationMode::Strict).is_err());
        for r in 1..5u32 {
            let n = 2 * (r + 1);
            for i in 0..=r as i64 {
                let xi = |k: i64| CycNumber::root_of_unity(n, 2 * k);
                let f = &RatFunc::monomial(xi(-i), 1) + &RatFunc::monomial(xi(i), -1);
                let want = (&RatFunc::monomial(xi(-i), 1) - &RatFunc::monomial(xi(i), -1)).scale(&c(r as i64 + 1));
                assert_eq!(f.integrate_in_t(r + 1, IntegrationMode::Strict).unwrap(), want);
            }
        }
    }

    #[test]
    fn series_examples() {
        let s = g_r1().series_expand(3).unwrap();
        assert_eq!(s, vec![c(0), c(1), c(1), c(1)]);
        let s = rf(&[1], &[1, 1]).series_expand(2).unwrap();
        assert_eq!(s, vec![c(1), c(-1), c(1)]);
        // r=2: delta G = q/(1+q)^2 in q
        let g2 = rf(&[0, 1], &[1, 1]);
        let s = g2.delta(1).series_expand(3).unwrap();
        assert_eq!(s, vec![c(0), c(1), c(-2), c(3)]);
        assert!(RatFunc::monomial(c(1), -1).series_expand(2).is_err());
    }

    #[test]
    fn reflection_and_decimation() {
        let g = g_r1();
        assert_eq!(&g + &g.invert_variable(), RatFunc::from_int(-1));
        let h = g.compose_power(3);
        assert_eq!(h.decimate(3), Some(g.clone()));
        assert_eq!(w().decimate(2), None);
        assert_eq!(h.eval(&c(2)).unwrap(), CycNumber::from_rational(rat(-8, 7)));
        assert!(g.eval(&c(1)).is_err());
    }

    #[test]
    fn zero_identity_series_is_zero() {
        let g = g_r1();
        let lhs = g.delta(1);
        let rhs = &g + &(&g * &g);
        let diff = &lhs - &rhs;
        for order in 0..12 {
            assert!(diff.series_expand(order).unwrap().iter().all(CycNumber::is_zero));
        }
    }

    fn arb_rf() -> impl Strategy<Value = RatFunc> {
        (prop::collection::vec(-4i64..5, 1..4), prop::collection::vec(-4i64..5, 1..4), 0usize..3).prop_filter_map(
            "nonzero den",
            |(n, d, zk)| {
                let z = CycNumber::root_of_unity(4, zk as i64);
                let num = poly(&n).scale(&z);
                let den = poly(&d);
                (!den.is_zero()).then(|| RatFunc::new(num, den).unwrap())
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn field_axioms(a in arb_rf(), b in arb_rf(), c3 in arb_rf()) {
            prop_assert_eq!(&(&a + &b) + &c3, &a + &(&b + &c3));
            prop_assert_eq!(&(&a * &b) * &c3, &a * &(&b * &c3));
            prop_assert_eq!(&a * &(&b + &c3), &(&a * &b) + &(&a * &c3));
            if !a.is_zero() {
                prop_assert!((&a * &a.inv()).is_one());
            }
        }

        #[test]
        fn delta_is_a_derivation(a in arb_rf(), b in arb_rf(), ram in 1u32..4) {
            let lhs = (&a * &b).delta(ram);
            let rhs = &(&a.delta(ram) * &b) + &(&a * &b.delta(ram));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn integrate_inverts_delta(terms in prop::collection::btree_map(-4i32..5, -5i64..6, 0..5), ram in 1u32..5) {
            let terms: BTreeMap<i32, CycNumber> = terms.into_iter().filter(|(e, _)| *e != 0).map(|(e, x)| (e, c(x))).collect();
            let f = RatFunc::from_laurent_terms(&terms);
            let back = f.delta(ram).integrate_in_t(ram, IntegrationMode::Strict).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
