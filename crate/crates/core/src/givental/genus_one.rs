//! Genus-one potential on the q-line:
//! dG = (1/48) d log prod Delta_i - (1/24) sum c^i_{-1} du_i + (1/2) sum_i R^1_ii du_i.

use serde::Serialize;

use super::connection::{connection_form, BranchFlips};
use super::frame::{canonical_basis, term_c_minus_one, term_log_delta};
use super::rmatrix::{r1_diagonal, r1_offdiagonal};
use super::spectrum::{build_spectrum, g_in_w};
use crate::algebra::cyclotomic::CycNumber;
use crate::algebra::laurent::EquivScalar;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::rational::{rat, serde_rational, sign_pow, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct GenusOneForm {
    pub r: u32,
    /// coefficient of dt on the q-line, as a function of q
    #[serde(serialize_with = "ser_in_q")]
    pub coefficient: RatFunc,
    #[serde(with = "serde_rational")]
    pub constant_at_zero: Rational,
    /// coefficient minus its value at q = 0
    #[serde(serialize_with = "ser_in_q")]
    pub remainder: RatFunc,
    /// the three q-line contributions, in the ramified variable w
    pub pieces: GenusOnePieces,
}

#[derive(Clone, Debug, Serialize)]
pub struct GenusOnePieces {
    pub log_delta: RatFunc,
    pub c_minus_one: RatFunc,
    pub r_diagonal: RatFunc,
}

fn ser_in_q<S: serde::Serializer>(f: &RatFunc, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&f.display_in("q"))
}

fn as_q_function(f: &RatFunc, r: u32) -> Result<RatFunc> {
    f.decimate(r as usize + 1)
        .ok_or_else(|| Error::Verification(format!("q-line coefficient is not a function of w^{}", r + 1)))
}

/// Compute dG/dt on the q-line from the frame, the connection and R^1.
pub fn genus_one_form(r: u32, flips: &BranchFlips) -> Result<GenusOneForm> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let frame = canonical_basis(build_spectrum(r));
    let conn = connection_form(&frame, flips)?;
    let off = r1_offdiagonal(&frame, &conn)?;
    let diag = r1_diagonal(&frame, &off)?;

    let log_delta = term_log_delta(&frame).scale_rational(&rat(1, 48));
    let c_minus_one = term_c_minus_one(&frame)?.on_line;
    let mut rsum = EquivScalar::zero();
    for (d, p) in diag.iter().zip(&frame.p) {
        rsum = &rsum + &(d * p);
    }
    let r_diagonal = rsum.non_equivariant_limit()?.scale_rational(&rat(1, 2));

    let total = &(&log_delta - &c_minus_one) + &r_diagonal;
    let coefficient = as_q_function(&total, r)?;
    let c0 = coefficient
        .value_at_zero()
        .and_then(|c| c.as_rational())
        .ok_or_else(|| Error::Verification("genus-one coefficient has no rational value at q = 0".into()))?;
    let remainder = &coefficient - &RatFunc::from_rational(c0.clone());
    Ok(GenusOneForm {
        r,
        coefficient,
        constant_at_zero: c0,
        remainder,
        pieces: GenusOnePieces { log_delta, c_minus_one, r_diagonal },
    })
}

/// kappa = (-1)^{r+1} (r+1)/24
pub fn kappa(r: u32) -> Rational {
    rat(sign_pow(r as i64 + 1) * (r as i64 + 1), 24)
}

/// G(q) = q / (1 + (-1)^r q)
pub fn g_function(r: u32) -> RatFunc {
    as_q_function(&g_in_w(r), r).expect("G is a function of q")
}

/// -r(r+1)/48 + kappa G(q)
pub fn genus_one_closed_form(r: u32) -> RatFunc {
    &RatFunc::from_rational(rat(-(r as i64) * (r as i64 + 1), 48)) + &g_function(r).scale_rational(&kappa(r))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenusOneRow {
    pub degree: u32,
    #[serde(with = "serde_rational")]
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenusOneTable {
    pub r: u32,
    pub rows: Vec<GenusOneRow>,
}

impl GenusOneTable {
    pub fn values(&self) -> Vec<Rational> {
        self.rows.iter().map(|row| row.value.clone()).collect()
    }
}

/// Degree-d genus-one invariants <>_{1,d} = [q^d] (dG/dt) / d for 1 <= d <= dmax.
pub fn genus_one_table(form: &GenusOneForm, dmax: u32) -> Result<GenusOneTable> {
    let series = form.remainder.series_expand(dmax as usize + 1)?;
    let mut rows = Vec::new();
    for d in 1..=dmax {
        let c = series.get(d as usize).cloned().unwrap_or_else(CycNumber::zero);
        let v = c
            .as_rational()
            .ok_or_else(|| Error::Verification(format!("degree {d} coefficient is not rational")))?;
        rows.push(GenusOneRow { degree: d, value: v / Rational::from_integer(d.into()) });
    }
    Ok(GenusOneTable { r: form.r, rows })
}

/// (-1)^{d(r+1)} (r+1) / (24 d)
pub fn genus_one_table_closed_form(r: u32, d: u32) -> Rational {
    rat(sign_pow(d as i64 * (r as i64 + 1)) * (r as i64 + 1), 24 * d as i64)
}
