//! Elements of the cyclotomic field Q(zeta_N), stored as coefficient vectors
//! modulo the N-th cyclotomic polynomial.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{format_rational, int, lcm_u32, to_f64, Rational};
use crate::error::{Error, Result};

pub fn euler_phi(n: u32) -> usize {
    let mut n = n as u64;
    let mut result = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

fn mobius(mut n: u32) -> i32 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// Coefficients of Phi_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic order must be positive");
    // Phi_n = prod_{d | n} (x^d - 1)^{mu(n/d)}
    let mut num = vec![1i64];
    let mut den = vec![1i64];
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let mut f = vec![0i64; d as usize + 1];
        f[0] = -1;
        f[d as usize] = 1;
        match mobius(n / d) {
            1 => num = mul_i64(&num, &f),
            -1 => den = mul_i64(&den, &f),
            _ => {}
        }
    }
    div_exact_i64(&num, &den)
}

fn mul_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

// divisor is monic up to sign (+-1 leading)
fn div_exact_i64(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead = b[db];
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db] / lead;
        q[k] = c;
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= c * bj;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0));
    q
}

/// Reduce an arbitrary-length coefficient vector modulo Phi_n.
fn reduce_mod_phi(n: u32, mut v: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let d = phi.len() - 1;
    if v.len() > d {
        for k in (d..v.len()).rev() {
            if v[k].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut v[k], Rational::zero());
            for (j, pj) in phi.iter().enumerate().take(d) {
                if *pj != 0 {
                    v[k - d + j] -= &c * int(*pj);
                }
            }
        }
    }
    v.resize(d, Rational::zero());
    v
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CycNumber {
    order: u32,
    #[serde(with = "super::rational::serde_rational_vec")]
    coeffs: Vec<Rational>,
}

impl CycNumber {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(q: Rational) -> Self {
        CycNumber { order: 1, coeffs: vec![q] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// Any coefficient vector in powers of zeta_order; reduced on the way in.
    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        CycNumber { order, coeffs: reduce_mod_phi(order, coeffs) }
    }

    /// zeta_order^k for any integer k.
    pub fn root_of_unity(order: u32, k: i64) -> Self {
        assert!(order >= 1, "cyclotomic order must be positive");
        let e = k.rem_euclid(order as i64) as usize;
        let mut v = vec![Rational::zero(); e + 1];
        v[e] = Rational::one();
        Self::from_coeffs(order, v)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_one())
    }

    /// Rational value, if the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        // Phi_n has degree >= 1, so 1, x, .., x^{d-1} is a basis and rationals
        // are exactly the vectors supported on the constant slot.
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Same element written in Q(zeta_to); requires order | to.
    pub fn promote(&self, to: u32) -> CycNumber {
        if to == self.order {
            return self.clone();
        }
        assert!(to % self.order == 0, "cannot promote order {} to {}", self.order, to);
        let step = (to / self.order) as usize;
        let mut v = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[k * step] = c.clone();
        }
        Self::from_coeffs(to, v)
    }

    fn common(a: &CycNumber, b: &CycNumber) -> (CycNumber, CycNumber, u32) {
        if a.order == b.order {
            return (a.clone(), b.clone(), a.order);
        }
        let n = lcm_u32(a.order, b.order);
        (a.promote(n), b.promote(n), n)
    }

    pub fn checked_inv(&self) -> Result<CycNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(CycNumber { order: self.order, coeffs: reduce_mod_phi(self.order, vec![q.recip()]) });
        }
        // Extended Euclid in Q[x]: s*a + t*Phi = 1
        let phi: Vec<Rational> = cyclotomic_polynomial(self.order).into_iter().map(int).collect();
        let a = trim(self.coeffs.clone());
        let (g, s) = ext_euclid(a, phi);
        debug_assert!(g.len() == 1);
        let ginv = g[0].recip();
        let s: Vec<Rational> = s.into_iter().map(|c| c * &ginv).collect();
        Ok(Self::from_coeffs(self.order, s))
    }

    pub fn inv(&self) -> CycNumber {
        self.checked_inv().expect("inverse of zero cyclotomic number")
    }

    pub fn pow(&self, e: i64) -> CycNumber {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNumber { order: self.order, coeffs: reduce_mod_phi(self.order, vec![Rational::one()]) };
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    pub fn scale(&self, q: &Rational) -> CycNumber {
        CycNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Numeric value with zeta_N = exp(2 pi i / N).
    pub fn to_complex(&self) -> Complex64 {
        let n = self.order as f64;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| Complex64::from_polar(to_f64(c), 2.0 * std::f64::consts::PI * k as f64 / n))
            .sum()
    }

    /// Galois conjugate zeta -> zeta^{-1} (complex conjugation).
    pub fn conj(&self) -> CycNumber {
        let n = self.order as usize;
        let mut v = vec![Rational::zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[(n - k) % n] += c;
        }
        Self::from_coeffs(self.order, v)
    }
}

fn trim(mut v: Vec<Rational>) -> Vec<Rational> {
    while v.len() > 1 && v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (vec![Rational::zero()], a.to_vec());
    }
    let mut rem = a.to_vec();
    let mut q = vec![Rational::zero(); a.len() - db];
    let lead_inv = b[db].recip();
    for k in (0..q.len()).rev() {
        let c = &rem[k + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[k + j] -= &c * bj;
            }
        }
        q[k] = c;
    }
    rem.truncate(db.max(1));
    (trim(q), trim(rem))
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn is_zero_poly(p: &[Rational]) -> bool {
    p.iter().all(Zero::is_zero)
}

/// Returns (g, s) with g = gcd(a, b) (a constant here) and s*a = g mod b.
fn ext_euclid(a: Vec<Rational>, b: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (vec![Rational::one()], vec![Rational::zero()]);
    while !is_zero_poly(&r1) {
        let (q, r) = poly_divrem(&r0, &r1);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (a, b, _) = CycNumber::common(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycNumber {}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn add(self, o: &CycNumber) -> CycNumber {
        if self.order == o.order {
            let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x + y).collect();
            return CycNumber { order: self.order, coeffs };
        }
        let (a, b, _) = CycNumber::common(self, o);
        &a + &b
    }
}

impl<'a> Sub<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn sub(self, o: &CycNumber) -> CycNumber {
        if self.order == o.order {
            let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(x, y)| x - y).collect();
            return CycNumber { order: self.order, coeffs };
        }
        let (a, b, _) = CycNumber::common(self, o);
        &a - &b
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, o: &CycNumber) -> CycNumber {
        if self.order != o.order {
            // cheap path when one side is rational
            if let Some(q) = self.as_rational() {
                return o.scale(&q);
            }
            if let Some(q) = o.as_rational() {
                return self.scale(&q);
            }
            let (a, b, _) = CycNumber::common(self, o);
            return &a * &b;
        }
        if self.order == 1 {
            return CycNumber { order: 1, coeffs: vec![&self.coeffs[0] * &o.coeffs[0]] };
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in o.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    v[i + j] += x * y;
                }
            }
        }
        CycNumber::from_coeffs(self.order, v)
    }
}

impl<'a> Div<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn div(self, o: &CycNumber) -> CycNumber {
        self * &o.inv()
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident, $t:ty) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &'a $t) -> $t {
                (&self).$m(o)
            }
        }
    };
}
pub(crate) use forward_owned;

forward_owned!(Add, add, CycNumber);
forward_owned!(Sub, sub, CycNumber);
forward_owned!(Mul, mul, CycNumber);
forward_owned!(Div, div, CycNumber);

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return write!(f, "{}", super::rational::display_rational(&q));
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                _ => write!(f, "({})*z{}^{}", super::rational::display_rational(c), self.order, k)?,
            }
        }
        Ok(())
    }
}

/// sum_{i=0}^{N-1} zeta_N^{k i}
pub fn cyc_power_sum(n: u32, k: i64) -> CycNumber {
    let mut acc = CycNumber::from_coeffs(n, vec![Rational::zero()]);
    for i in 0..n as i64 {
        acc = &acc + &CycNumber::root_of_unity(n, k * i);
    }
    acc
}

/// k-th elementary symmetric function of `values` with entry `omit` removed.
pub fn elementary_symmetric_omitting(values: &[CycNumber], omit: usize, k: usize) -> Result<CycNumber> {
    if omit >= values.len() {
        return Err(Error::IndexOutOfRange { index: omit, len: values.len() });
    }
    if k + 1 > values.len() {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds {} remaining values", values.len() - 1)));
    }
    // e[j] after processing a prefix
    let mut e = vec![CycNumber::one()];
    for (idx, v) in values.iter().enumerate() {
        if idx == omit {
            continue;
        }
        e.push(CycNumber::zero());
        for j in (1..e.len()).rev() {
            e[j] = &e[j] + &(&e[j - 1] * v);
        }
    }
    Ok(e[k].clone())
}
