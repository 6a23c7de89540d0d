//! The extremal function G, the ring R of polynomials in G over the Novikov
//! ring, the flop transform and the flop-invariance identities.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::cyclotomic::CycNumber;
use crate::algebra::linalg::solve_rational;
use crate::algebra::poly::Poly;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::rational::{display_rational, int, rat, serde_rational_vec, sign_pow, Rational};
use crate::coh_ring::chern_flop_identity;
use crate::error::{Error, Result};

/// (-1)^{r+1}: the sign with delta G = G + s G^2.
pub fn g_sign(r: u32) -> i64 {
    sign_pow(r as i64 + 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GFunction {
    pub r: u32,
    pub f: RatFunc,
}

impl GFunction {
    /// First `n` coefficients of the q-expansion, starting at q^0.
    pub fn series(&self, n: usize) -> Vec<Rational> {
        rational_series(&self.f, n).expect("G is regular at q = 0 with rational coefficients")
    }
}

/// G(q) = q / (1 - (-1)^{r+1} q)
pub fn g_function(r: u32) -> GFunction {
    let q = RatFunc::var();
    let f = &q / &(&RatFunc::one() - &q.scale_rational(&int(g_sign(r))));
    GFunction { r, f }
}

fn rational_series(f: &RatFunc, n: usize) -> Result<Vec<Rational>> {
    f.series_expand(n)?
        .into_iter()
        .take(n)
        .map(|c| c.as_rational().ok_or_else(|| Error::Verification("non-rational series coefficient".into())))
        .collect()
}

/// G(q) + G(1/q), which should be the constant (-1)^r.
pub fn reflection_sum(r: u32) -> RatFunc {
    let g = g_function(r).f;
    &g + &g.invert_variable()
}

pub fn verify_reflection(r: u32) -> bool {
    reflection_sum(r) == RatFunc::from_int(sign_pow(r as i64))
}

/// Polynomial in G with rational coefficients, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GPoly {
    #[serde(with = "serde_rational_vec")]
    pub coeffs: Vec<Rational>,
}

impl GPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        GPoly { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|c| int(*c)).collect())
    }

    pub fn g() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * int(k as i64)).collect())
    }

    pub fn mul(&self, other: &GPoly) -> Self {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Self::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// p(G(q)) as a rational function of q.
    pub fn eval_in_q(&self, r: u32) -> RatFunc {
        let g = g_function(r).f;
        let mut acc = RatFunc::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &g) + &RatFunc::from_rational(c.clone());
        }
        acc
    }
}

impl fmt::Display for GPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => display_rational(c),
                1 => format!("{}*G", display_rational(c)),
                _ => format!("{}*G^{k}", display_rational(c)),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// p_m with delta^m G = p_m(G): p_0 = G, p_{m+1} = p_m'(G) (G + s G^2).
pub fn delta_g_polynomial(r: u32, m: u32) -> GPoly {
    let dg = GPoly::from_ints(&[0, 1, g_sign(r)]);
    let mut p = GPoly::g();
    for _ in 0..m {
        p = p.derivative().mul(&dg);
    }
    p
}

/// delta^m G by repeated q d/dq on the rational function.
pub fn delta_g_direct(r: u32, m: u32) -> RatFunc {
    let mut f = g_function(r).f;
    for _ in 0..m {
        f = f.delta(1);
    }
    f
}

/// Coefficients sum_{d >= 1} d^m s^{d-1} q^d up to q^{n-1}.
pub fn delta_g_series_oracle(r: u32, m: u32, n: usize) -> Vec<Rational> {
    let s = g_sign(r);
    (0..n)
        .map(|d| if d == 0 { Rational::zero() } else { int((d as i64).pow(m) * sign_pow_of(s, d as u32 - 1)) })
        .collect()
}

fn sign_pow_of(s: i64, e: u32) -> i64 {
    if s == 1 || e % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaPolyCheck {
    pub r: u32,
    pub m: u32,
    pub polynomial: String,
    pub integral: bool,
    pub matches_rational: bool,
    pub matches_series: bool,
}

impl DeltaPolyCheck {
    pub fn passed(&self) -> bool {
        self.integral && self.matches_rational && self.matches_series
    }
}

/// delta^m G = p_m(G), checked exactly and against the series to `order` terms.
pub fn check_delta_g_polynomial(r: u32, m: u32, order: usize) -> Result<DeltaPolyCheck> {
    let p = delta_g_polynomial(r, m);
    let via_p = p.eval_in_q(r);
    let direct = delta_g_direct(r, m);
    let series = rational_series(&via_p, order)?;
    Ok(DeltaPolyCheck {
        r,
        m,
        polynomial: p.to_string(),
        integral: p.is_integral(),
        matches_rational: via_p == direct,
        matches_series: series == delta_g_series_oracle(r, m, order),
    })
}

/// delta^m G evaluated at 1/q equals (-1)^{m-1} delta^m G at q (m >= 1);
/// m = 0 is the reflection identity.
pub fn reciprocal_antisymmetry(r: u32, m: u32) -> bool {
    if m == 0 {
        return verify_reflection(r);
    }
    let h = delta_g_direct(r, m);
    h.invert_variable() == h.scale_rational(&int(sign_pow(m as i64 - 1)))
}

/// Genus-one n-point invariance: with dG/dlog q = `quantum` (the q-dependent
/// part), delta^n G(q) = (-1)^{n-2} (delta'^n G')(1/q), and delta' = -delta.
pub fn genus1_npoint_invariance(quantum: &RatFunc, n: u32) -> Result<bool> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n-point invariance needs n >= 2, got {n}")));
    }
    let mut lhs = quantum.clone();
    for _ in 1..n {
        lhs = lhs.delta(1);
    }
    // delta'^n G'(q') with q' = 1/q: the same function of q', then substituted
    let rhs = lhs.invert_variable().scale_rational(&int(sign_pow(n as i64 - 2)));
    Ok(lhs == rhs)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OnePointDefect {
    pub r: u32,
    pub chern_number: String,
    pub classical: String,
    pub quantum: String,
    pub total: String,
}

/// <h>_1^X - <F h>_1^{X'}: the classical part -(1/24)(c_{2r}(X).(2h - xi)) plus
/// the quantum part F(q) + F(1/q), F = dG/dlog q minus its constant.
/// `chern_shift` is added to the Chern number (zero for the actual value).
pub fn genus1_onepoint_defect_with(r: u32, quantum: &RatFunc, chern_shift: &Rational) -> Result<(Rational, OnePointDefect)> {
    let chern = chern_flop_identity(r) + chern_shift;
    let classical = -chern.clone() * rat(1, 24);
    let qsum = quantum + &quantum.invert_variable();
    let q = qsum
        .as_rational()
        .ok_or_else(|| Error::Verification(format!("F(q) + F(1/q) is not a rational constant: {qsum}")))?;
    let total = &classical + &q;
    let report = OnePointDefect {
        r,
        chern_number: display_rational(&chern),
        classical: display_rational(&classical),
        quantum: display_rational(&q),
        total: display_rational(&total),
    };
    Ok((total, report))
}

/// The defect with the genus-one potential of the q-line computed from scratch.
pub fn genus1_onepoint_defect(r: u32) -> Result<Rational> {
    let form = crate::givental::genus_one_form(r, &Default::default())?;
    Ok(genus1_onepoint_defect_with(r, &form.remainder, &Rational::zero())?.0)
}

/// For r = 1 and odd m = 2g - 3: delta^m G is invariant under q -> 1/q and its
/// q^d coefficient is d^m.
pub fn fp_generating_invariance(m: u32, order: usize) -> Result<bool> {
    if m % 2 == 0 {
        return Err(Error::InvalidArgument(format!("m = 2g - 3 must be odd, got {m}")));
    }
    let invariant = reciprocal_antisymmetry(1, m);
    let series = rational_series(&delta_g_direct(1, m), order)?;
    let pattern = series.iter().enumerate().skip(1).all(|(d, c)| *c == int((d as i64).pow(m)));
    Ok(invariant && pattern)
}

/// Element of R: sum of c q^{a l + b gamma} G^k with a in Z, b >= 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingRElement {
    pub r: u32,
    /// (l-exponent, gamma-exponent, G-degree) -> coefficient
    terms: BTreeMap<(i32, u32, u32), Rational>,
    /// (E . beta) when the element is a tagged finite form
    pub contact_weight: Option<u32>,
}

impl RingRElement {
    pub fn zero(r: u32) -> Self {
        RingRElement { r, terms: BTreeMap::new(), contact_weight: None }
    }

    pub fn monomial(r: u32, c: Rational, l: i32, gamma: u32, g: u32) -> Self {
        let mut x = Self::zero(r);
        x.add_term((l, gamma, g), c);
        x
    }

    pub fn g(r: u32) -> Self {
        Self::monomial(r, Rational::one(), 0, 0, 1)
    }

    pub fn q_l(r: u32) -> Self {
        Self::monomial(r, Rational::one(), 1, 0, 0)
    }

    pub fn q_gamma(r: u32) -> Self {
        Self::monomial(r, Rational::one(), 0, 1, 0)
    }

    pub fn from_gpoly(r: u32, p: &GPoly, l: i32, gamma: u32) -> Self {
        let mut x = Self::zero(r);
        for (k, c) in p.coeffs.iter().enumerate() {
            x.add_term((l, gamma, k as u32), c.clone());
        }
        x
    }

    /// q^{d2 gamma} (p_0(G) + q^l p_1(G) + ... + q^{d2 l} p_{d2}(G))
    pub fn finite_form(r: u32, d2: u32, ps: &[GPoly]) -> Result<Self> {
        if ps.len() != d2 as usize + 1 {
            return Err(Error::InvalidArgument(format!("finite form with d2 = {d2} needs {} polynomials", d2 + 1)));
        }
        let mut x = Self::zero(r);
        for (j, p) in ps.iter().enumerate() {
            x = &x + &Self::from_gpoly(r, p, j as i32, d2);
        }
        x.contact_weight = Some(d2);
        Ok(x)
    }

    pub fn terms(&self) -> &BTreeMap<(i32, u32, u32), Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn g_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.2).max()
    }

    fn add_term(&mut self, key: (i32, u32, u32), c: Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn check_r(&self, other: &Self) {
        assert_eq!(self.r, other.r, "elements of R for different r");
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_r(other);
        let mut out = Self::zero(self.r);
        for ((a1, b1, k1), c1) in &self.terms {
            for ((a2, b2, k2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2, k1 + k2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::monomial(self.r, Rational::one(), 0, 0, 0);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// The flop transform: G -> (-1)^r - G, q^{a l + b gamma} -> q^{(b - a) l + b gamma}.
    pub fn flop_transform(&self) -> Self {
        let s = int(sign_pow(self.r as i64));
        let img_g = &Self::monomial(self.r, s, 0, 0, 0) - &Self::g(self.r);
        let mut out = Self::zero(self.r);
        for ((a, b, k), c) in &self.terms {
            let shifted = Self::monomial(self.r, c.clone(), *b as i32 - a, *b, 0);
            out = &out + &shifted.mul(&img_g.pow(*k));
        }
        out.contact_weight = self.contact_weight;
        out
    }

    /// delta = q^l d/dq^l: delta q^l = q^l, delta q^gamma = 0, delta G = G + s G^2.
    pub fn delta(&self) -> Self {
        let s = int(g_sign(self.r));
        let mut out = Self::zero(self.r);
        for ((a, b, k), c) in &self.terms {
            out.add_term((*a, *b, *k), c * int(*a as i64));
            if *k > 0 {
                let ck = c * int(*k as i64);
                out.add_term((*a, *b, *k), ck.clone());
                out.add_term((*a, *b, k + 1), ck * &s);
            }
        }
        out.contact_weight = self.contact_weight;
        out
    }

    /// Expansion as a rational function in q = q^l at a fixed gamma exponent.
    pub fn gamma_slice(&self, gamma: u32) -> RatFunc {
        let g = g_function(self.r).f;
        let mut acc = RatFunc::zero();
        for ((a, b, k), c) in &self.terms {
            if *b == gamma {
                let t = &RatFunc::monomial(CycNumber::from_rational(c.clone()), *a) * &g.pow(*k as i32);
                acc = &acc + &t;
            }
        }
        acc
    }
}

impl std::ops::Add for &RingRElement {
    type Output = RingRElement;
    fn add(self, o: &RingRElement) -> RingRElement {
        self.check_r(o);
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        if self.contact_weight != o.contact_weight {
            out.contact_weight = None;
        }
        out
    }
}

impl std::ops::Sub for &RingRElement {
    type Output = RingRElement;
    fn sub(self, o: &RingRElement) -> RingRElement {
        self.check_r(o);
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, -c.clone());
        }
        if self.contact_weight != o.contact_weight {
            out.contact_weight = None;
        }
        out
    }
}

impl fmt::Display for RingRElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b, k), c)| {
                let mut s = display_rational(c);
                if *a != 0 {
                    s.push_str(&format!("*q^({a}l)"));
                }
                if *b != 0 {
                    s.push_str(&format!("*q^({b}gamma)"));
                }
                if *k != 0 {
                    s.push_str(&format!("*G^{k}"));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Fit a truncated q-series to p_0(G) + q p_1 + ... + q^{d2} p_{d2}.
///
/// The products q^j G^k are linearly dependent (q (1 + s G) = G), so the fit
/// is performed in the independent family {G^k : k <= bound} + {q^j : 1 <= j <= d2},
/// which spans the same space; p_j for j >= 1 come out constant.
pub fn g_polynomial_fit(r: u32, series: &[Rational], d2: u32, degree_bound: u32) -> Result<Vec<GPoly>> {
    let unknowns = degree_bound as usize + 1 + d2 as usize;
    let needed = (d2 as usize + 1) * (degree_bound as usize + 1) + 2;
    if series.len() < needed {
        return Err(Error::InvalidArgument(format!(
            "fit needs at least {needed} coefficients, got {}",
            series.len()
        )));
    }
    let n = series.len();
    let g = g_function(r).f;
    let mut columns: Vec<Vec<Rational>> = Vec::with_capacity(unknowns);
    for k in 0..=degree_bound {
        columns.push(rational_series(&g.pow(k as i32), n)?);
    }
    for j in 1..=d2 {
        columns.push((0..n).map(|i| if i == j as usize { Rational::one() } else { Rational::zero() }).collect());
    }
    let a: Vec<Vec<Rational>> = (0..n).map(|i| columns.iter().map(|col| col[i].clone()).collect()).collect();
    let x = solve_rational(&a, series).ok_or_else(|| {
        Error::NotOfFiniteForm(format!("series is not in the span of G^k (k <= {degree_bound}) and q^j (j <= {d2})"))
    })?;
    let mut out = vec![GPoly::new(x[..=degree_bound as usize].to_vec())];
    for j in 0..d2 as usize {
        out.push(GPoly::new(vec![x[degree_bound as usize + 1 + j].clone()]));
    }
    Ok(out)
}

/// Rewrite a rational function of q as a function of G via q = G/(1 + s G);
/// succeeds when the result is a polynomial in G with rational coefficients.
pub fn g_polynomial_of(r: u32, f: &RatFunc) -> Result<GPoly> {
    let g = RatFunc::var();
    let q = &g / &(&RatFunc::one() + &g.scale_rational(&int(g_sign(r))));
    let horner = |p: &Poly| {
        let mut acc = RatFunc::zero();
        for c in p.coeffs().iter().rev() {
            acc = &(&acc * &q) + &RatFunc::constant(c.clone());
        }
        acc
    };
    let h = &horner(f.numer()) / &horner(f.denom());
    if h.denom().degree() != Some(0) {
        return Err(Error::NotOfFiniteForm(format!("{f} is not a polynomial in G")));
    }
    let coeffs = h.numer().rational_coeffs().ok_or_else(|| Error::NotOfFiniteForm("non-rational coefficient".into()))?;
    let lead = h.denom().coeff(0).as_rational().ok_or_else(|| Error::NotOfFiniteForm("non-rational coefficient".into()))?;
    Ok(GPoly::new(coeffs.into_iter().map(|c| c / &lead).collect()))
}

/// True when every coefficient of the fit is an integer.
pub fn fit_is_integral(ps: &[GPoly]) -> bool {
    ps.iter().all(GPoly::is_integral)
}
