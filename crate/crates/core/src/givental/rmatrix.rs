//! R-matrix on the q-line: R^1 and the recursion
//! (R_n)_{ij} (p_i - p_j) = [(C + d) R_{n-1}]_{ij}.

use serde::Serialize;

use super::connection::{weighted_root_sum, xi_constant_closed_form};
use super::spectrum::{xi, zeta, CanonicalFrame};
use crate::algebra::laurent::EquivScalar;
use crate::algebra::linalg::{identity, mat_mul, transpose, Matrix};
use crate::algebra::ratfunc::{IntegrationMode, RatFunc};
use crate::algebra::rational::{int, rat, sign_pow};
use crate::error::{Error, Result};

fn p_diff_inv(frame: &CanonicalFrame, i: usize, j: usize) -> Result<EquivScalar> {
    (&frame.p[i] - &frame.p[j]).inverse()
}

/// R^1_{ij} = C_{ij} / (p_i - p_j) for i != j; zero diagonal.
pub fn r1_offdiagonal(frame: &CanonicalFrame, conn: &Matrix<EquivScalar>) -> Result<Matrix<EquivScalar>> {
    let n = frame.size();
    let mut out = vec![vec![EquivScalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out[i][j] = &conn[i][j] * &p_diff_inv(frame, i, j)?;
            }
        }
    }
    Ok(out)
}

pub fn r1_entry(frame: &CanonicalFrame, conn: &Matrix<EquivScalar>, i: usize, j: usize) -> Result<EquivScalar> {
    if i == j {
        return Err(Error::InvalidArgument("off-diagonal R^1 entry requested on the diagonal".into()));
    }
    Ok(&conn[i][j] * &p_diff_inv(frame, i, j)?)
}

/// The displayed closed form
/// (-1)^r xi^{(j-i)/2} w a_i a_j sum mu xi^{mu(j-i)} / ((r+1)^2 lambda (xi^j - xi^i)).
pub fn r1_offdiagonal_display_form(frame: &CanonicalFrame, i: usize, j: usize) -> EquivScalar {
    let r = frame.r;
    let k = j as i64 - i as i64;
    let scalar = &(&zeta(r, k) * &weighted_root_sum(r, k)) / &(&xi(r, j as i64) - &xi(r, i as i64));
    let scalar = scalar.scale(&(rat(1, (r as i64 + 1).pow(2)) * int(sign_pow(r as i64))));
    let f = (&RatFunc::var() * &(&frame.a[i] * &frame.a[j])).scale(&scalar);
    EquivScalar::monomial(-1, f)
}

/// Diagonal of R^1 from dR_ii = -sum_j R_ij R_ji (p_i - p_j) dt.
pub fn r1_diagonal(frame: &CanonicalFrame, r1off: &Matrix<EquivScalar>) -> Result<Vec<EquivScalar>> {
    let n = frame.size();
    let ram = frame.ramification();
    (0..n)
        .map(|i| {
            let d = r1_diagonal_derivative(frame, r1off, i);
            d.integrate_in_t(ram, IntegrationMode::Strict).map_err(|e| match e {
                Error::NonIntegrableConstant(c) => {
                    Error::NonIntegrableConstant(format!("flatness violated for R^1_{i}{i}: constant {c}"))
                }
                other => other,
            })
        })
        .collect()
}

/// dt-coefficient of dR^1_{ii}.
pub fn r1_diagonal_derivative(frame: &CanonicalFrame, r1off: &Matrix<EquivScalar>, i: usize) -> EquivScalar {
    let mut acc = EquivScalar::zero();
    for j in 0..frame.size() {
        if j != i {
            acc = &acc - &(&(&r1off[i][j] * &r1off[j][i]) * &(&frame.p[i] - &frame.p[j]));
        }
    }
    acc
}

/// (-1)^r Xi_r/((r+1)^3 lambda) (xi^{-i} w + xi^i w^{-1})
pub fn r1_diagonal_closed_form(frame: &CanonicalFrame, i: usize) -> EquivScalar {
    let r = frame.r;
    let coef = xi_constant_closed_form(r) * int(sign_pow(r as i64)) * rat(1, (r as i64 + 1).pow(3));
    let f = &RatFunc::monomial(xi(r, -(i as i64)), 1) + &RatFunc::monomial(xi(r, i as i64), -1);
    EquivScalar::monomial(-1, f.scale_rational(&coef))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RMatrixOrder {
    pub order: usize,
    pub entries: Matrix<EquivScalar>,
    /// integration constants added to the diagonal (zero for odd orders)
    pub diagonal_constants: Vec<EquivScalar>,
}

fn delta_matrix(m: &Matrix<EquivScalar>, ram: u32) -> Matrix<EquivScalar> {
    m.iter().map(|row| row.iter().map(|x| x.delta(ram)).collect()).collect()
}

/// sum_{a+b=n} (-1)^a R_a^T R_b
pub fn unitarity_residual(rs: &[Matrix<EquivScalar>], n: usize) -> Matrix<EquivScalar> {
    let size = rs[0].len();
    let mut acc = vec![vec![EquivScalar::zero(); size]; size];
    for a in 0..=n {
        let t = mat_mul(&transpose(&rs[a]), &rs[n - a]);
        for i in 0..size {
            for j in 0..size {
                acc[i][j] = if a % 2 == 0 { &acc[i][j] + &t[i][j] } else { &acc[i][j] - &t[i][j] };
            }
        }
    }
    acc
}

fn is_w_constant(x: &EquivScalar) -> bool {
    x.terms().values().all(|f| f.as_constant().is_some())
}

/// R_1 .. R_N. Off-diagonals from the recursion, diagonals from the vanishing
/// diagonal of the next step. Odd orders keep zero integration constants;
/// at even orders the constant is the unique one making R unitary.
pub fn r_matrix_recursion(frame: &CanonicalFrame, conn: &Matrix<EquivScalar>, big_n: usize) -> Result<Vec<RMatrixOrder>> {
    if big_n < 1 {
        return Err(Error::InvalidArgument("R-matrix order must be at least 1".into()));
    }
    let n = frame.size();
    let ram = frame.ramification();
    let mut rs: Vec<Matrix<EquivScalar>> = vec![identity(n, &EquivScalar::one())];
    let mut out = Vec::new();
    for order in 1..=big_n {
        let prev = &rs[order - 1];
        let rhs = {
            let cr = mat_mul(conn, prev);
            let dr = delta_matrix(prev, ram);
            crate::algebra::linalg::mat_add(&cr, &dr)
        };
        let mut cur = vec![vec![EquivScalar::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    cur[i][j] = &rhs[i][j] * &p_diff_inv(frame, i, j)?;
                }
            }
        }
        let cr = mat_mul(conn, &cur);
        for i in 0..n {
            cur[i][i] = (-&cr[i][i]).integrate_in_t(ram, IntegrationMode::Strict).map_err(|_| {
                Error::NonIntegrableConstant(format!("diagonal of R_{order} at i = {i} has a w^0 derivative"))
            })?;
        }
        let mut constants = vec![EquivScalar::zero(); n];
        if order % 2 == 0 {
            let mut trial = rs.clone();
            trial.push(cur.clone());
            let res = unitarity_residual(&trial, order);
            for i in 0..n {
                let c = res[i][i].scale_rational(&rat(-1, 2));
                if !is_w_constant(&c) {
                    return Err(Error::NonIntegrableConstant(format!(
                        "unitarity of R_{order} at i = {i} needs a non-constant correction"
                    )));
                }
                cur[i][i] = &cur[i][i] + &c;
                constants[i] = c;
            }
        }
        rs.push(cur.clone());
        out.push(RMatrixOrder { order, entries: cur, diagonal_constants: constants });
    }
    Ok(out)
}

/// Full list R_0 .. R_N for residual checks.
pub fn with_identity(frame: &CanonicalFrame, orders: &[RMatrixOrder]) -> Vec<Matrix<EquivScalar>> {
    let mut v = vec![identity(frame.size(), &EquivScalar::one())];
    v.extend(orders.iter().map(|o| o.entries.clone()));
    v
}

pub fn is_zero_scalar_matrix(m: &Matrix<EquivScalar>) -> bool {
    m.iter().all(|row| row.iter().all(EquivScalar::is_zero))
}
