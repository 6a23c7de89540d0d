//! Canonical basis, Delta_i and the first two terms of dG.

use serde::Serialize;

use super::spectrum::{g_in_w, pair_polys, q_in_w, xi, CanonicalFrame};
use crate::algebra::cyclotomic::CycNumber;
use crate::algebra::laurent::EquivScalar;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::rational::{int, rat, sign_pow};
use crate::error::{Error, Result};

/// Fill epsilon_i = (q c_i/(r+1)) a_i^r prod_{l != i} (1 - a_l p/lambda) and
/// Delta_i = (r+1) lambda q^{-1} c_i^{-1} p_i^{2r}.
pub fn canonical_basis(mut frame: CanonicalFrame) -> CanonicalFrame {
    let r = frame.r;
    let n = frame.size();
    let q = q_in_w(r);
    let mut eps = Vec::with_capacity(n);
    for i in 0..n {
        let pref = (&(&q * &frame.c[i]) * &frame.a[i].pow(r as i32)).scale_rational(&rat(1, r as i64 + 1));
        let mut poly = vec![EquivScalar::from_ratfunc(pref)];
        for l in 0..n {
            if l == i {
                continue;
            }
            let lin = vec![EquivScalar::one(), EquivScalar::monomial(-1, -&frame.a[l])];
            poly = super::spectrum::mul_p_poly(&poly, &lin);
        }
        eps.push(poly);
    }
    frame.epsilon = eps;
    frame.delta = (0..n).map(|i| delta_closed_form(&frame, i)).collect();
    frame
}

pub fn delta_closed_form(frame: &CanonicalFrame, i: usize) -> EquivScalar {
    let r = frame.r;
    let f = (&q_in_w(r).inv() * &frame.c[i].inv()).scale_rational(&int(r as i64 + 1));
    &EquivScalar::monomial(1, f) * &frame.p[i].pow(2 * r)
}

/// du_j applied to a polynomial in p: substitute p -> p_j.
pub fn eval_du(frame: &CanonicalFrame, j: usize, poly: &[EquivScalar]) -> EquivScalar {
    let mut acc = EquivScalar::zero();
    let mut pw = EquivScalar::one();
    for c in poly {
        acc = &acc + &(c * &pw);
        pw = &pw * &frame.p[j];
    }
    acc
}

/// <epsilon_i, epsilon_j>
pub fn epsilon_pairing(frame: &CanonicalFrame, i: usize, j: usize) -> EquivScalar {
    pair_polys(frame.r, &frame.epsilon[i], &frame.epsilon[j])
}

/// q c_i a_i^{2r} / ((r+1) lambda^{2r+1})
pub fn epsilon_norm_closed_form(frame: &CanonicalFrame, i: usize) -> EquivScalar {
    let r = frame.r;
    let f = (&(&q_in_w(r) * &frame.c[i]) * &frame.a[i].pow(2 * r as i32)).scale_rational(&rat(1, r as i64 + 1));
    EquivScalar::monomial(-(2 * r as i32 + 1), f)
}

/// prod Delta_i = (r+1)^{r+1} lambda^{(2r+1)(r+1)} xi^{-r(r+1)/2} q^{-r} G^{2r}
pub fn delta_product_closed_form(r: u32) -> EquivScalar {
    let c = CycNumber::from_int((r as i64 + 1).pow(r + 1));
    let xi_part = xi(r, -((r * (r + 1) / 2) as i64));
    let f = (&q_in_w(r).pow(-(r as i32)) * &g_in_w(r).pow(2 * r as i32)).scale(&(&c * &xi_part));
    EquivScalar::monomial(((2 * r + 1) * (r + 1)) as i32, f)
}

/// d log(prod Delta_i) / dt, from the computed Delta_i.
pub fn term_log_delta(frame: &CanonicalFrame) -> RatFunc {
    let ram = frame.ramification();
    let mut acc = RatFunc::zero();
    for d in &frame.delta {
        let (_, f) = d.as_monomial().expect("Delta_i is a single lambda power");
        acc = &acc + &(&f.delta(ram) / f);
    }
    acc
}

/// r (1 - 2 (-1)^r G)
pub fn term_log_delta_closed_form(r: u32) -> RatFunc {
    let s = sign_pow(r as i64);
    (&RatFunc::one() - &g_in_w(r).scale(&CycNumber::from_int(2 * s))).scale(&CycNumber::from_int(r as i64))
}

/// Coefficients of a one-form on dt_0 .. dt_r, plus its restriction to the
/// q-line t = t_1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FlatOneForm {
    pub components: Vec<EquivScalar>,
    pub restricted: EquivScalar,
}

/// du_i = sum_k p_i^k dt_k
pub fn du_form(frame: &CanonicalFrame, i: usize) -> FlatOneForm {
    let mut comps = Vec::new();
    let mut pw = EquivScalar::one();
    for _ in 0..frame.size() {
        comps.push(pw.clone());
        pw = &pw * &frame.p[i];
    }
    let restricted = comps[1].clone();
    FlatOneForm { components: comps, restricted }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CMinusOneTerm {
    /// sum_i c^i_{-1} du_i / 24 on dt_0 .. dt_r, before any limit
    pub full: FlatOneForm,
    /// lambda -> 0 limits of the components with k >= 1
    pub limits: Vec<RatFunc>,
    /// q-line coefficient (dt_1), lambda-free
    pub on_line: RatFunc,
}

/// sum_i c^i_{-1} du_i / 24 with c^i_{-1} = (r+1)/lambda.
pub fn term_c_minus_one(frame: &CanonicalFrame) -> Result<CMinusOneTerm> {
    let r = frame.r;
    let pref = EquivScalar::monomial(-1, RatFunc::from_rational(rat(r as i64 + 1, 24)));
    let mut comps = vec![EquivScalar::zero(); frame.size()];
    for i in 0..frame.size() {
        let du = du_form(frame, i);
        for (k, c) in du.components.iter().enumerate() {
            comps[k] = &comps[k] + &(&pref * c);
        }
    }
    // dt_0 carries (r+1)^2/(24 lambda), constant in q and off the q-line
    let mut limits = Vec::new();
    for c in &comps[1..] {
        limits.push(c.non_equivariant_limit()?);
    }
    let on_line = comps[1].non_equivariant_limit()?;
    if comps[1].terms().keys().any(|e| *e != 0) {
        return Err(Error::Verification("dt_1 component is not lambda-free".into()));
    }
    let restricted = comps[1].clone();
    Ok(CMinusOneTerm { full: FlatOneForm { components: comps, restricted }, limits, on_line })
}

/// (-1)^r (r+1)^2/24 G
pub fn term_c_minus_one_closed_form(r: u32) -> RatFunc {
    g_in_w(r).scale_rational(&(rat((r as i64 + 1).pow(2), 24) * int(sign_pow(r as i64))))
}

#[cfg(test)]
mod tests {
    use super::super::spectrum::build_spectrum;
    use super::*;

    #[test]
    fn duality_and_orthogonality() {
        for r in 1..4 {
            let f = canonical_basis(build_spectrum(r));
            for i in 0..f.size() {
                for j in 0..f.size() {
                    let v = eval_du(&f, j, &f.epsilon[i]);
                    let want = if i == j { EquivScalar::one() } else { EquivScalar::zero() };
                    assert_eq!(v, want, "r={r} i={i} j={j}");
                    if i != j {
                        assert!(epsilon_pairing(&f, i, j).is_zero());
                    }
                }
                let norm = epsilon_pairing(&f, i, i);
                assert_eq!(norm, epsilon_norm_closed_form(&f, i));
                assert_eq!(&norm * &f.delta[i], EquivScalar::one());
            }
        }
    }

    #[test]
    fn delta_values() {
        // r=1, i=0: 2 lambda q^{-1} c_0^{-1} p_0^2
        let f = canonical_basis(build_spectrum(1));
        let want = &EquivScalar::monomial(1, (&q_in_w(1).inv() * &f.c[0].inv()).scale(&CycNumber::from_int(2))) * &f.p[0].pow(2);
        assert_eq!(f.delta[0], want);
        for r in 1..5 {
            let f = canonical_basis(build_spectrum(r));
            let prod = f.delta.iter().fold(EquivScalar::one(), |acc, d| &acc * d);
            assert_eq!(prod, delta_product_closed_form(r), "r={r}");
        }
    }

    #[test]
    fn first_term() {
        // r=1: (1+q)/(1-q) with q = w^2
        let f = canonical_basis(build_spectrum(1));
        let q = q_in_w(1);
        assert_eq!(term_log_delta(&f), &(&RatFunc::one() + &q) / &(&RatFunc::one() - &q));
        for r in 1..5 {
            let f = canonical_basis(build_spectrum(r));
            let t = term_log_delta(&f);
            assert_eq!(t, term_log_delta_closed_form(r));
            assert_eq!(t.value_at_zero().unwrap(), CycNumber::from_int(r as i64));
        }
    }

    #[test]
    fn second_term() {
        let f = canonical_basis(build_spectrum(1));
        let t = term_c_minus_one(&f).unwrap();
        assert_eq!(t.on_line, g_in_w(1).scale_rational(&rat(-1, 6)));
        for r in 1..5 {
            let f = canonical_basis(build_spectrum(r));
            let t = term_c_minus_one(&f).unwrap();
            assert_eq!(t.on_line, term_c_minus_one_closed_form(r));
            for (k, lim) in t.limits.iter().enumerate().skip(1) {
                assert!(lim.is_zero(), "r={r} k={}", k + 1);
            }
            // the off-line dt_0 piece
            assert_eq!(t.full.components[0], EquivScalar::monomial(-1, RatFunc::from_rational(rat((r as i64 + 1).pow(2), 24))));
        }
        let t2 = term_c_minus_one(&canonical_basis(build_spectrum(2))).unwrap();
        assert_eq!(t2.on_line, g_in_w(2).scale_rational(&rat(9, 24)));
    }
}
