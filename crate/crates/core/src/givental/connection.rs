//! The connection one-form Psi dPsi^{-1} on the q-line and the constant Xi_r.

use std::collections::BTreeSet;

use serde::Serialize;

use super::spectrum::{xi, zeta, CanonicalFrame};
use crate::algebra::cyclotomic::CycNumber;
use crate::algebra::laurent::EquivScalar;
use crate::algebra::linalg::{inverse, mat_mul, Matrix};
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::rational::{int, rat, Rational};
use crate::error::{Error, Result};

/// Unordered index pairs whose square-root branch zeta^{i-j} is negated.
pub type BranchFlips = BTreeSet<(usize, usize)>;

fn flipped(flips: &BranchFlips, i: usize, j: usize) -> bool {
    flips.contains(&(i.min(j), i.max(j)))
}

/// dt-coefficients of Psi dPsi^{-1}, computed from Psi = D M with
/// M_{i mu} = p_i^{mu - r}, D_i^2 = q c_i/((r+1) lambda):
/// (Psi dPsi^{-1})_{ij} = (d_i/d_j) (M dM^{-1})_{ij} - delta_{ij} dlog d_i,
/// d_i/d_j = zeta^{i-j}, dlog d_i = r/(2(r+1)) dt.
/// M = A diag(lambda^{mu-r}) with A_{i mu} = a_i^{r-mu}, so M dM^{-1} = A dA^{-1}.
pub fn connection_form(frame: &CanonicalFrame, flips: &BranchFlips) -> Result<Matrix<EquivScalar>> {
    let r = frame.r;
    let n = frame.size();
    let ram = frame.ramification();
    let a: Matrix<RatFunc> = (0..n).map(|i| (0..n).map(|mu| frame.a[i].pow((r as usize - mu) as i32)).collect()).collect();
    let a_inv = inverse(&a)?;
    let d_a_inv: Matrix<RatFunc> = a_inv.iter().map(|row| row.iter().map(|x| x.delta(ram)).collect()).collect();
    let m = mat_mul(&a, &d_a_inv);
    let dlog_d = RatFunc::from_rational(rat(r as i64, 2 * (r as i64 + 1)));
    let mut out = vec![vec![EquivScalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut ratio = zeta(r, i as i64 - j as i64);
            if flipped(flips, i, j) && i != j {
                ratio = -ratio;
            }
            let mut v = m[i][j].scale(&ratio);
            if i == j {
                v = &v - &dlog_d;
            }
            out[i][j] = EquivScalar::from_ratfunc(v);
        }
    }
    Ok(out)
}

/// sum_{mu=1}^{r} mu xi^{mu k}
pub fn weighted_root_sum(r: u32, k: i64) -> CycNumber {
    (1..=r as i64).fold(CycNumber::zero(), |acc, mu| &acc + &xi(r, mu * k).scale(&int(mu)))
}

/// The displayed closed form xi^{(j-i)/2}/(r+1)^2 sum mu xi^{mu(j-i)},
/// with xi^{(j-i)/2} = zeta^{j-i}; zero on the diagonal.
pub fn connection_display_form(r: u32, i: usize, j: usize) -> CycNumber {
    if i == j {
        return CycNumber::zero();
    }
    let k = j as i64 - i as i64;
    (&zeta(r, k) * &weighted_root_sum(r, k)).scale(&rat(1, (r as i64 + 1).pow(2)))
}

/// The expression preceding the display:
/// -q sqrt(c_i c_j)/(r+1)^2 sum_{k=1}^{r} k c_j^k c_i^{r-k}, with the same
/// branch sqrt(c_i c_j) = c_i zeta^{j-i}.
pub fn connection_derivation_form(frame: &CanonicalFrame, i: usize, j: usize) -> RatFunc {
    let r = frame.r;
    if i == j {
        return RatFunc::zero();
    }
    let q = super::spectrum::q_in_w(r);
    let sqrt_cc = frame.c[i].scale(&zeta(r, j as i64 - i as i64));
    let mut sum = RatFunc::zero();
    for k in 1..=r as i32 {
        sum = &sum + &(&frame.c[j].pow(k) * &frame.c[i].pow(r as i32 - k)).scale(&CycNumber::from_int(k as i64));
    }
    (&(&q * &sqrt_cc) * &sum).scale_rational(&-rat(1, (r as i64 + 1).pow(2)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiConstant {
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub value: Rational,
    pub vanishing_sum_zero: bool,
}

/// g_k(xi) = (xi^k - 1)^{-1} sum mu xi^{mu k} sum mu xi^{-mu k} in Q(zeta_{r+1}).
pub fn g_k(r: u32, k: i64) -> CycNumber {
    let n = r + 1;
    let x = |e: i64| CycNumber::root_of_unity(n, e);
    let s = |e: i64| (1..=r as i64).fold(CycNumber::zero(), |acc, mu| &acc + &x(mu * e).scale(&int(mu)));
    &(&s(k) * &s(-k)) / &(&x(k) - &CycNumber::one())
}

/// Brute-force Xi_r = sum_{k=1}^{r} g_k(xi), and the companion identity
/// sum_k (xi^k + 1) g_k(xi) = 0.
pub fn xi_constant(r: u32) -> Result<XiConstant> {
    let mut total = CycNumber::zero();
    let mut companion = CycNumber::zero();
    for k in 1..=r as i64 {
        let g = g_k(r, k);
        companion = &companion + &(&(&CycNumber::root_of_unity(r + 1, k) + &CycNumber::one()) * &g);
        total = &total + &g;
    }
    let value = total
        .as_rational()
        .ok_or_else(|| Error::Verification(format!("Xi_{r} is not rational: {total}")))?;
    Ok(XiConstant { value, vanishing_sum_zero: companion.is_zero() })
}

/// -(r+2)(r+1)^2 r/24
pub fn xi_constant_closed_form(r: u32) -> Rational {
    let r = r as i64;
    -rat((r + 2) * (r + 1) * (r + 1) * r, 24)
}
