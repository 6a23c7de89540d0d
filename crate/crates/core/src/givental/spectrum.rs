//! Equivariant spectrum of p* on the q-line: p_i = lambda / a_i,
//! a_i = 1 + c_i, c_i = (-1)^r xi^i w^{-1}, with w^{r+1} = q.

use num_traits::Zero;

use crate::algebra::cyclotomic::CycNumber;
use crate::algebra::laurent::EquivScalar;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::rational::{binomial_q, int, sign_pow, Rational};

/// Coefficient field order 2(r+1), so that xi^{1/2} = zeta exists.
pub fn field_order(r: u32) -> u32 {
    2 * (r + 1)
}

pub fn ramification(r: u32) -> u32 {
    r + 1
}

/// zeta_{2(r+1)}^k
pub fn zeta(r: u32, k: i64) -> CycNumber {
    CycNumber::root_of_unity(field_order(r), k)
}

/// xi^k with xi = exp(2 pi i/(r+1)) = zeta^2.
pub fn xi(r: u32, k: i64) -> CycNumber {
    zeta(r, 2 * k)
}

pub fn q_in_w(r: u32) -> RatFunc {
    RatFunc::var().pow(r as i32 + 1)
}

/// G = q / (1 - (-1)^{r+1} q) written in w.
pub fn g_in_w(r: u32) -> RatFunc {
    let q = q_in_w(r);
    &q / &(&RatFunc::one() - &q.scale(&CycNumber::from_int(sign_pow(r as i64 + 1))))
}

#[derive(Clone, Debug)]
pub struct CanonicalFrame {
    pub r: u32,
    pub a: Vec<RatFunc>,
    pub c: Vec<RatFunc>,
    pub p: Vec<EquivScalar>,
    /// epsilon[i][k]: coefficient of p^k in the i-th idempotent
    pub epsilon: Vec<Vec<EquivScalar>>,
    pub delta: Vec<EquivScalar>,
}

impl CanonicalFrame {
    pub fn size(&self) -> usize {
        (self.r + 1) as usize
    }

    pub fn ramification(&self) -> u32 {
        ramification(self.r)
    }
}

/// a, c, p filled; epsilon and delta empty.
pub fn build_spectrum(r: u32) -> CanonicalFrame {
    assert!(r >= 1, "rank r must be at least 1");
    let s = CycNumber::from_int(sign_pow(r as i64));
    let c: Vec<RatFunc> = (0..=r as i64).map(|i| RatFunc::monomial(&s * &xi(r, i), -1)).collect();
    let a: Vec<RatFunc> = c.iter().map(|ci| &RatFunc::one() + ci).collect();
    let p = a.iter().map(|ai| EquivScalar::monomial(1, ai.inv())).collect();
    CanonicalFrame { r, a, c, p, epsilon: Vec::new(), delta: Vec::new() }
}

/// q (lambda - p_i)^{r+1} - p_i^{r+1}; zero for every root.
pub fn char_poly_residual(frame: &CanonicalFrame, i: usize) -> EquivScalar {
    let r = frame.r;
    let q = EquivScalar::from_ratfunc(q_in_w(r));
    let diff = &EquivScalar::lambda() - &frame.p[i];
    &(&q * &diff.pow(r + 1)) - &frame.p[i].pow(r + 1)
}

/// Elementary symmetric functions e_1..e_{r+1} of the p_i.
pub fn elementary_symmetric_p(frame: &CanonicalFrame) -> Vec<EquivScalar> {
    let mut e = vec![EquivScalar::one()];
    for pi in &frame.p {
        e.push(EquivScalar::zero());
        for j in (1..e.len()).rev() {
            e[j] = &e[j] + &(&e[j - 1] * pi);
        }
    }
    e.remove(0);
    e
}

/// e_k(p) / lambda^k for k = 1..r+1, as rational functions in w.
pub fn charpoly_coefficients(r: u32) -> Vec<RatFunc> {
    let frame = build_spectrum(r);
    elementary_symmetric_p(&frame)
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let (exp, f) = e.as_monomial().expect("e_k is homogeneous in lambda");
            assert_eq!(exp, k as i32 + 1);
            f.clone()
        })
        .collect()
}

/// Closed form of e_k(p)/lambda^k: (-1)^r C(r+1, k) G.
pub fn charpoly_closed_form(r: u32, k: u32) -> RatFunc {
    g_in_w(r).scale_rational(&(binomial_q(r as i64 + 1, k as i64) * int(sign_pow(r as i64))))
}

/// <p^k . p^l> = C(2r-d, r-d) lambda^{-(2r+1-d)}, d = k + l; zero for d > r.
pub fn equiv_pairing(r: u32, k: u32, l: u32) -> EquivScalar {
    let d = k + l;
    if d > r {
        return EquivScalar::zero();
    }
    let c = binomial_q((2 * r - d) as i64, (r - d) as i64);
    EquivScalar::monomial(-((2 * r + 1 - d) as i32), RatFunc::from_rational(c))
}

/// Independent route: localization, int_{P^r} p^d (lambda - p)^{-(r+1)},
/// expanding (1 - x)^{-(r+1)} by repeated multiplication of truncated series.
pub fn pairing_by_localization(r: u32, d: u32) -> EquivScalar {
    if d > r {
        return EquivScalar::zero();
    }
    let m = (r - d) as usize;
    // coefficients of (1 - x)^{-1} truncated at x^m, raised to r+1
    let geo = vec![Rational::from_integer(1.into()); m + 1];
    let mut acc = vec![Rational::zero(); m + 1];
    acc[0] = int(1);
    for _ in 0..=r {
        let mut next = vec![Rational::zero(); m + 1];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in geo.iter().enumerate() {
                if i + j <= m {
                    next[i + j] += x * y;
                }
            }
        }
        acc = next;
    }
    // lambda^{-(r+1)} (p/lambda)^m picks the p^r coefficient
    EquivScalar::monomial(-((r + 1) as i32 + m as i32), RatFunc::from_rational(acc[m].clone()))
}

/// Pairing of two polynomials in p with EquivScalar coefficients.
pub fn pair_polys(r: u32, f: &[EquivScalar], g: &[EquivScalar]) -> EquivScalar {
    let mut acc = EquivScalar::zero();
    for (k, fk) in f.iter().enumerate() {
        if fk.is_zero() {
            continue;
        }
        for (l, gl) in g.iter().enumerate() {
            if gl.is_zero() || k + l > r as usize {
                continue;
            }
            acc = &acc + &(&(fk * gl) * &equiv_pairing(r, k as u32, l as u32));
        }
    }
    acc
}

/// <(p/lambda)^k (1 - p/lambda)^{2r-k}>
pub fn lemma_zero_value(r: u32, k: u32) -> EquivScalar {
    let inv_l = EquivScalar::monomial(-1, RatFunc::one());
    // polynomial in p with coefficients, lowest first
    let x = vec![EquivScalar::zero(), inv_l.clone()];
    let one_minus = vec![EquivScalar::one(), -&inv_l];
    let mut poly = vec![EquivScalar::one()];
    for _ in 0..k {
        poly = mul_p_poly(&poly, &x);
    }
    for _ in 0..(2 * r - k) {
        poly = mul_p_poly(&poly, &one_minus);
    }
    pair_polys(r, &poly, &[EquivScalar::one()])
}

pub(crate) fn mul_p_poly(a: &[EquivScalar], b: &[EquivScalar]) -> Vec<EquivScalar> {
    let mut out = vec![EquivScalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}
