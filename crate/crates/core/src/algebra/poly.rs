//! Dense univariate polynomials over Q(zeta_N).

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::cyclotomic::{forward_owned, CycNumber};
use super::rational::{int, Rational};

/// Lowest degree first; no trailing zeros, so the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Poly {
    coeffs: Vec<CycNumber>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(CycNumber::one())
    }

    pub fn x() -> Self {
        Self::monomial(CycNumber::one(), 1)
    }

    pub fn constant(c: CycNumber) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: CycNumber, deg: usize) -> Self {
        let mut v = vec![CycNumber::zero(); deg + 1];
        v[deg] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<CycNumber>) -> Self {
        while coeffs.last().is_some_and(CycNumber::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_rationals(cs: &[Rational]) -> Self {
        Self::from_coeffs(cs.iter().cloned().map(CycNumber::from_rational).collect())
    }

    pub fn coeffs(&self) -> &[CycNumber] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> CycNumber {
        self.coeffs.get(i).cloned().unwrap_or_else(CycNumber::zero)
    }

    pub fn lead(&self) -> Option<&CycNumber> {
        self.coeffs.last()
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|c| !c.is_zero()).count() == 1
    }

    pub fn scale(&self, c: &CycNumber) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![CycNumber::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// Divide by x^k, assuming the low coefficients vanish.
    pub fn unshift(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(CycNumber::is_zero));
        Poly::from_coeffs(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("polynomial division by zero");
        let Some(ds) = self.degree() else {
            return (Poly::zero(), Poly::zero());
        };
        if ds < dd {
            return (Poly::zero(), self.clone());
        }
        let lead_inv = d.coeffs[dd].inv();
        let mut rem = self.coeffs.clone();
        let mut q = vec![CycNumber::zero(); ds - dd + 1];
        for k in (0..q.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                if !dj.is_zero() {
                    rem[k + j] = &rem[k + j] - &(&c * dj);
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        (Poly::from_coeffs(q), Poly::from_coeffs(rem))
    }

    /// Monic version and the leading coefficient removed.
    pub fn monic(&self) -> (Poly, CycNumber) {
        match self.lead() {
            None => (Poly::zero(), CycNumber::one()),
            Some(l) if l.is_one() => (self.clone(), CycNumber::one()),
            Some(l) => {
                let l = l.clone();
                (self.scale(&l.inv()), l)
            }
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.monic().0, b.monic().0);
        while !y.is_zero() {
            let r = x.divrem(&y).1;
            x = y;
            y = r.monic().0;
        }
        x
    }

    pub fn derivative(&self) -> Poly {
        Poly::from_coeffs(
            self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c.scale(&int(k as i64))).collect(),
        )
    }

    /// x d/dx
    pub fn euler_derivative(&self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().enumerate().map(|(k, c)| c.scale(&int(k as i64))).collect())
    }

    pub fn eval(&self, x: &CycNumber) -> CycNumber {
        let mut acc = CycNumber::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// x^deg p(1/x) for a chosen deg >= degree.
    pub fn reversed(&self, deg: usize) -> Poly {
        let mut v = vec![CycNumber::zero(); deg + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            v[deg - k] = c.clone();
        }
        Poly::from_coeffs(v)
    }

    /// p(x^k)
    pub fn compose_power(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![CycNumber::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        Poly::from_coeffs(v)
    }

    /// p(c x)
    pub fn scale_variable(&self, c: &CycNumber) -> Poly {
        let mut pw = CycNumber::one();
        let mut v = Vec::with_capacity(self.coeffs.len());
        for x in &self.coeffs {
            v.push(x * &pw);
            pw = &pw * c;
        }
        Poly::from_coeffs(v)
    }

    /// q with p(x) = q(x^k), when only multiples of k occur.
    pub fn decimate(&self, k: usize) -> Option<Poly> {
        let mut v = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % k == 0 {
                v.push(c.clone());
            } else if !c.is_zero() {
                return None;
            }
        }
        Some(Poly::from_coeffs(v))
    }

    pub fn map_coeffs(&self, f: impl Fn(&CycNumber) -> CycNumber) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Rational coefficients, when every coefficient is rational.
    pub fn rational_coeffs(&self) -> Option<Vec<Rational>> {
        self.coeffs.iter().map(CycNumber::as_rational).collect()
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n)
            .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::from_coeffs(v)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &(-o)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![CycNumber::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] = &v[i + j] + &(a * b);
                }
            }
        }
        Poly::from_coeffs(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

forward_owned!(Add, add, Poly);
forward_owned!(Sub, sub, Poly);
forward_owned!(Mul, mul, Poly);

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}
