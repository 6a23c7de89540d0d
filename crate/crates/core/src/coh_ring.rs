//! H*(X) = Q[h, xi] / (h^{r+1}, xi (xi - h)^{r+1}) for the local model.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::linalg::determinant;
use crate::algebra::rational::{binomial_q, int, rat, sign_pow, Rational};
use crate::error::{Error, Result};

/// Unreduced polynomial in h, xi; keys are (h-exponent, xi-exponent).
#[derive(Clone, Debug, PartialEq, Default)]
pub struct HXPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl HXPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn monomial(c: Rational, a: u32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        HXPoly { terms }
    }

    pub fn h() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn xi() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Rational> {
        &self.terms
    }

    fn add_term(&mut self, k: (u32, u32), c: Rational) {
        let v = self.terms.remove(&k).unwrap_or_else(Rational::zero) + c;
        if !v.is_zero() {
            self.terms.insert(k, v);
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HXPoly { terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Substitute h -> xi - h, keeping xi.
    pub fn flop_substitute(&self) -> Self {
        let sub = &Self::xi() - &Self::h();
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            out = &out + &(&sub.pow(*a) * &Self::monomial(c.clone(), 0, *b));
        }
        out
    }

    /// Homogeneous piece of degree k (h and xi both have degree 1).
    pub fn graded_piece(&self, k: u32) -> Self {
        HXPoly { terms: self.terms.iter().filter(|((a, b), _)| a + b == k).map(|(k, v)| (*k, v.clone())).collect() }
    }
}

impl<'a> Add<&'a HXPoly> for &'a HXPoly {
    type Output = HXPoly;
    fn add(self, o: &HXPoly) -> HXPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a HXPoly> for &'a HXPoly {
    type Output = HXPoly;
    fn sub(self, o: &HXPoly) -> HXPoly {
        self + &o.scale(&int(-1))
    }
}

impl<'a> Mul<&'a HXPoly> for &'a HXPoly {
    type Output = HXPoly;
    fn mul(self, o: &HXPoly) -> HXPoly {
        let mut out = HXPoly::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

/// Reduced class on the basis h^a xi^b, 0 <= a <= r, 0 <= b <= r+1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohClass {
    r: u32,
    #[serde(with = "coeff_list")]
    coeffs: BTreeMap<(u32, u32), Rational>,
}

mod coeff_list {
    use super::*;
    use crate::algebra::rational::{format_rational, parse_rational};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<(u32, u32), Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        m.iter().map(|((a, b), c)| (*a, *b, format_rational(c))).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BTreeMap<(u32, u32), Rational>, D::Error> {
        let v = Vec::<(u32, u32, String)>::deserialize(d)?;
        v.into_iter()
            .map(|(a, b, c)| parse_rational(&c).map(|c| ((a, b), c)).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Canonical form modulo h^{r+1} = 0 and xi (xi - h)^{r+1} = 0.
pub fn reduce(r: u32, p: &HXPoly) -> CohClass {
    let mut work: BTreeMap<(u32, u32), Rational> = p.terms.clone();
    let mut out: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
    // take the largest xi-power first; each rewrite strictly lowers it
    while let Some(key) = work.keys().max_by_key(|(a, b)| (*b, *a)).copied() {
        let c = work.remove(&key).unwrap();
        let (a, b) = key;
        if c.is_zero() || a > r {
            continue;
        }
        if b <= r + 1 {
            let slot = out.entry(key).or_insert_with(Rational::zero);
            *slot += c;
            continue;
        }
        // xi^{r+2} = -sum_{k=0}^{r} C(r+1,k) (-1)^{r+1-k} h^{r+1-k} xi^{k+1}
        let rest = b - (r + 2);
        for k in 0..=r {
            let na = a + r + 1 - k;
            if na > r {
                continue;
            }
            let coef = -binomial_q(r as i64 + 1, k as i64) * int(sign_pow((r + 1 - k) as i64)) * &c;
            let slot = work.entry((na, rest + k + 1)).or_insert_with(Rational::zero);
            *slot += coef;
        }
    }
    out.retain(|_, c| !c.is_zero());
    CohClass { r, coeffs: out }
}

impl CohClass {
    pub fn zero(r: u32) -> Self {
        CohClass { r, coeffs: BTreeMap::new() }
    }

    pub fn from_poly(r: u32, p: &HXPoly) -> Self {
        reduce(r, p)
    }

    pub fn h(r: u32) -> Self {
        reduce(r, &HXPoly::h())
    }

    pub fn xi(r: u32) -> Self {
        reduce(r, &HXPoly::xi())
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn coeffs(&self) -> &BTreeMap<(u32, u32), Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.coeffs.get(&(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn to_poly(&self) -> HXPoly {
        HXPoly { terms: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        reduce(self.r, &self.to_poly().scale(c))
    }

    pub fn graded_piece(&self, k: u32) -> Self {
        CohClass { r: self.r, coeffs: self.to_poly().graded_piece(k).terms }
    }

    /// Coefficient of h^r xi^{r+1}.
    pub fn integrate(&self) -> Rational {
        self.coeff(self.r, self.r + 1)
    }
}

impl<'a> Add<&'a CohClass> for &'a CohClass {
    type Output = CohClass;
    fn add(self, o: &CohClass) -> CohClass {
        assert_eq!(self.r, o.r);
        reduce(self.r, &(&self.to_poly() + &o.to_poly()))
    }
}

impl<'a> Sub<&'a CohClass> for &'a CohClass {
    type Output = CohClass;
    fn sub(self, o: &CohClass) -> CohClass {
        assert_eq!(self.r, o.r);
        reduce(self.r, &(&self.to_poly() - &o.to_poly()))
    }
}

impl<'a> Mul<&'a CohClass> for &'a CohClass {
    type Output = CohClass;
    fn mul(self, o: &CohClass) -> CohClass {
        assert_eq!(self.r, o.r);
        reduce(self.r, &(&self.to_poly() * &o.to_poly()))
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        self.scale(&int(-1))
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|((a, b), c)| format!("({})*h^{a}*xi^{b}", crate::algebra::rational::display_rational(c)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn basis(r: u32) -> Vec<(u32, u32)> {
    let mut v = Vec::new();
    for b in 0..=r + 1 {
        for a in 0..=r {
            v.push((a, b));
        }
    }
    v
}

pub fn pairing_matrix(r: u32) -> Vec<Vec<Rational>> {
    let b = basis(r);
    b.iter()
        .map(|(a1, b1)| {
            b.iter().map(|(a2, b2)| reduce(r, &HXPoly::monomial(Rational::one(), a1 + a2, b1 + b2)).integrate()).collect()
        })
        .collect()
}

pub fn pairing_determinant(r: u32) -> Rational {
    determinant(&pairing_matrix(r))
}

/// (1+h)^{r+1} (1+xi) (1+xi-h)^{r+1}, unreduced.
pub fn total_chern_poly(r: u32) -> HXPoly {
    let one = HXPoly::one();
    let h = HXPoly::h();
    let xi = HXPoly::xi();
    let a = (&one + &h).pow(r + 1);
    let b = &one + &xi;
    let c = (&(&one + &xi) - &h).pow(r + 1);
    &(&a * &b) * &c
}

pub fn total_chern(r: u32) -> CohClass {
    reduce(r, &total_chern_poly(r))
}

pub fn chern_class(r: u32, k: u32) -> CohClass {
    total_chern(r).graded_piece(k)
}

/// Class of a line in the zero section, h^{r-1} (xi - h)^{r+1}.
pub fn line_class(r: u32) -> CohClass {
    let z = (&HXPoly::xi() - &HXPoly::h()).pow(r + 1);
    reduce(r, &(&HXPoly::h().pow(r - 1) * &z))
}

/// Image of h under the flop correspondence, written in the (isomorphic)
/// cohomology of the flopped model: xi' - h'.
pub fn flop_divisor_h(r: u32) -> CohClass {
    reduce(r, &(&HXPoly::xi() - &HXPoly::h()))
}

/// integral of c_{2r}(X) (2h - xi)
pub fn chern_flop_identity(r: u32) -> Rational {
    let alpha = reduce(r, &(&HXPoly::h().scale(&int(2)) - &HXPoly::xi()));
    (&chern_class(r, 2 * r) * &alpha).integrate()
}

/// Degree-zero genus-one one-point invariant -(1/24) (c_{2r}(X) . alpha).
pub fn genus1_degree0(alpha: &CohClass) -> Rational {
    let r = alpha.r();
    -(&chern_class(r, 2 * r) * alpha).integrate() * rat(1, 24)
}

/// integral of c_3 - c_2 c_1 on the threefold local model (r = 1).
pub fn c3_minus_c2c1(r: u32) -> Result<Rational> {
    if r != 1 {
        return Err(Error::InvalidArgument(format!("c3 - c2 c1 is defined here for r = 1 only, got r = {r}")));
    }
    Ok(c3_minus_c2c1_of(r, &total_chern_poly(r)))
}

/// Same number computed from the flopped presentation h -> xi - h.
pub fn c3_minus_c2c1_flop_side(r: u32) -> Result<Rational> {
    if r != 1 {
        return Err(Error::InvalidArgument(format!("c3 - c2 c1 is defined here for r = 1 only, got r = {r}")));
    }
    Ok(c3_minus_c2c1_of(r, &total_chern_poly(r).flop_substitute()))
}

fn c3_minus_c2c1_of(r: u32, c: &HXPoly) -> Rational {
    let c1 = reduce(r, &c.graded_piece(1));
    let c2 = reduce(r, &c.graded_piece(2));
    let c3 = reduce(r, &c.graded_piece(3));
    (&c3 - &(&c2 * &c1)).integrate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::binomial;

    #[test]
    fn relations_vanish() {
        for r in 1..6 {
            assert!(reduce(r, &HXPoly::h().pow(r + 1)).is_zero());
            let rel = &HXPoly::xi() * &(&HXPoly::xi() - &HXPoly::h()).pow(r + 1);
            assert!(reduce(r, &rel).is_zero());
        }
        let p = &(&HXPoly::one() + &HXPoly::h()) * &(&HXPoly::one() + &HXPoly::xi());
        let c = reduce(1, &p);
        assert_eq!(c.coeffs().len(), 4);
        assert_eq!(c.to_poly(), p);
    }

    #[test]
    fn integration_against_segre_oracle() {
        // independent: int h^a xi^{r+1+j} = C(r+j, j) when a + j = r
        for r in 1..6u32 {
            assert_eq!(reduce(r, &HXPoly::monomial(int(1), r, r + 1)).integrate(), int(1));
            for a in 0..=r {
                for j in 0..=r + 2 {
                    let v = reduce(r, &HXPoly::monomial(int(1), a, r + 1 + j)).integrate();
                    let want = if a + j == r { Rational::from_integer(binomial((r + j) as i64, j as i64)) } else { int(0) };
                    assert_eq!(v, want, "r={r} a={a} j={j}");
                }
            }
            // low degree integrates to zero
            assert!(reduce(r, &HXPoly::monomial(int(1), 0, r)).integrate().is_zero());
        }
        // r=1: xi^3 = 2 h xi^2 - h^2 xi = 2 h xi^2
        assert_eq!(reduce(1, &HXPoly::monomial(int(1), 0, 3)), reduce(1, &HXPoly::monomial(int(2), 1, 2)));
    }

    #[test]
    fn rank_and_duality() {
        for r in 1..5 {
            assert_eq!(basis(r).len(), ((r + 1) * (r + 2)) as usize);
            let d = pairing_determinant(r);
            assert!(d == int(1) || d == int(-1), "r={r} det={d}");
        }
    }

    #[test]
    fn chern_pieces() {
        for r in 1..6 {
            assert_eq!(chern_class(r, 0), reduce(r, &HXPoly::one()));
            assert_eq!(chern_class(r, 1), CohClass::xi(r).scale(&int(r as i64 + 2)));
            let l = line_class(r);
            assert_eq!((&CohClass::h(r) * &l).integrate(), int(1));
            assert!((&CohClass::xi(r) * &l).integrate().is_zero());
            assert!((&chern_class(r, 1) * &l).integrate().is_zero());
        }
    }

    #[test]
    fn chern_identity() {
        for r in 1..7 {
            assert_eq!(chern_flop_identity(r), int(-(r as i64 + 1)), "r={r}");
            let alpha = &CohClass::h(r).scale(&int(2)) - &CohClass::xi(r);
            assert_eq!(genus1_degree0(&alpha), rat(r as i64 + 1, 24));
            assert!(genus1_degree0(&CohClass::zero(r)).is_zero());
        }
    }

    #[test]
    fn threefold_chern_number() {
        let v = c3_minus_c2c1(1).unwrap();
        assert_eq!(v, c3_minus_c2c1_flop_side(1).unwrap());
        assert!(c3_minus_c2c1(2).is_err());
        // hand expansion: c1 = 3xi, c2 = 3xi^2 + ..., computed via the oracle
        let c = total_chern_poly(1);
        let c1 = reduce(1, &c.graded_piece(1));
        let c2 = reduce(1, &c.graded_piece(2));
        let c3 = reduce(1, &c.graded_piece(3));
        assert_eq!(v, c3.integrate() - (&c2 * &c1).integrate());
    }

    #[test]
    fn serde_shape() {
        let c = CohClass::h(1);
        let s = serde_json_like(&c);
        assert!(s.contains("\"r\":1"));
    }

    fn serde_json_like(c: &CohClass) -> String {
        serde_json::to_string(c).unwrap()
    }
}
