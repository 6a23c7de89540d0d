//! Small quantum cohomology of the local model in Batyrev form:
//! h^{r+1} = q1 (xi - h)^{r+1}, xi (xi - h)^{r+1} = q2.
//!
//! Coefficients are polynomials in q2 over Q(q1): solving the first relation
//! for h^{r+1} divides by 1 - (-1)^{r+1} q1.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::cyclotomic::CycNumber;
use crate::algebra::fracseries::FracSeries;
use crate::algebra::laurent::LaurentRat;
use crate::algebra::linalg::{berkowitz, determinant, mat_mul, Matrix};
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::rational::{binomial_q, int, rat, sign_pow, to_f64, Rational};
use crate::coh_ring::basis;
use crate::error::{Error, Result};

/// Polynomial in q2 with coefficients in Q(q1).
pub type QCoeff = LaurentRat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Divisor {
    H,
    Xi,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QRingElement {
    pub r: u32,
    pub coeffs: BTreeMap<(u32, u32), QCoeff>,
}

fn q1() -> RatFunc {
    RatFunc::var()
}

fn q1q2() -> QCoeff {
    LaurentRat::monomial(1, q1())
}

fn q2() -> QCoeff {
    LaurentRat::lambda()
}

/// q1 / (1 - (-1)^{r+1} q1)
pub fn extremal_g_in_q1(r: u32) -> RatFunc {
    let s = sign_pow(r as i64 + 1);
    &q1() / &(&RatFunc::one() - &q1().scale(&CycNumber::from_int(s)))
}

fn add_into(map: &mut BTreeMap<(u32, u32), QCoeff>, k: (u32, u32), c: QCoeff) {
    let v = match map.remove(&k) {
        Some(x) => &x + &c,
        None => c,
    };
    if !v.is_zero() {
        map.insert(k, v);
    }
}

/// Quantum normal form of sum c_{ab} h^a xi^b.
pub fn quantum_reduce(r: u32, poly: BTreeMap<(u32, u32), QCoeff>) -> QRingElement {
    let g = extremal_g_in_q1(r);
    let mut work = poly;
    let mut out: BTreeMap<(u32, u32), QCoeff> = BTreeMap::new();
    while let Some((&(a, b), _)) = work.iter().next_back() {
        let c = work.remove(&(a, b)).unwrap();
        if c.is_zero() {
            continue;
        }
        if a <= r && b <= r + 1 {
            add_into(&mut out, (a, b), c);
        } else if a > r && b >= 1 {
            // h^{r+1} xi = q1 q2
            add_into(&mut work, (a - r - 1, b - 1), &c * &q1q2());
        } else if a > r {
            // h^{r+1} = G sum_{k=1}^{r+1} C(r+1,k) (-1)^{r+1-k} xi^k h^{r+1-k}
            for k in 1..=r + 1 {
                let coef = binomial_q(r as i64 + 1, k as i64) * int(sign_pow((r + 1 - k) as i64));
                let term = c.scale(&g.scale(&CycNumber::from_rational(coef)));
                add_into(&mut work, (a - r - 1 + r + 1 - k, k), term);
            }
        } else {
            // xi^{r+2} = q2 - sum_{k=0}^{r} C(r+1,k) (-1)^{r+1-k} xi^{k+1} h^{r+1-k}
            let rest = b - (r + 2);
            add_into(&mut work, (a, rest), &c * &q2());
            for k in 0..=r {
                let coef = -binomial_q(r as i64 + 1, k as i64) * int(sign_pow((r + 1 - k) as i64));
                add_into(&mut work, (a + r + 1 - k, rest + k + 1), c.scale_rational(&coef));
            }
        }
    }
    QRingElement { r, coeffs: out }
}

/// Column j holds D * (basis monomial j) expanded on the basis of `coh_ring::basis`.
pub fn quantum_mult_matrix(r: u32, d: Divisor) -> Matrix<QCoeff> {
    let b = basis(r);
    let idx: BTreeMap<(u32, u32), usize> = b.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let n = b.len();
    let mut m = vec![vec![QCoeff::zero(); n]; n];
    for (j, (a, e)) in b.iter().enumerate() {
        let k = match d {
            Divisor::H => (a + 1, *e),
            Divisor::Xi => (*a, e + 1),
        };
        let red = quantum_reduce(r, BTreeMap::from([(k, QCoeff::one())]));
        for (mono, c) in red.coeffs {
            m[idx[&mono]][j] = c;
        }
    }
    m
}

/// Specialize a quantum coefficient at numeric (q1, q2) in Q(zeta_4).
pub fn eval_qcoeff(c: &QCoeff, q1v: &CycNumber, q2v: &CycNumber) -> Result<CycNumber> {
    let mut acc = CycNumber::zero();
    for (e, f) in c.terms() {
        if *e < 0 {
            return Err(Error::InvalidArgument("negative q2 power in a quantum coefficient".into()));
        }
        acc = &acc + &(&f.eval(q1v)? * &q2v.pow(*e as i64));
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenPair {
    pub i: u32,
    pub j: u32,
    pub h: FracSeries,
    pub xi: FracSeries,
}

fn root_order(r: u32) -> u32 {
    (r + 1) * (r + 2)
}

/// omega^i (an (r+1)-st root of unity) and eta^j (an (r+2)-nd one).
fn omega_eta(r: u32, i: u32, j: u32) -> (CycNumber, CycNumber) {
    let n = root_order(r);
    (CycNumber::root_of_unity(n, ((r + 2) * i) as i64), CycNumber::root_of_unity(n, ((r + 1) * j) as i64))
}

/// Closed-form eigenvalues of h* and xi* expanded to u-order `order`.
pub fn eigen_formulas(r: u32, i: u32, j: u32, order: u32) -> Result<EigenPair> {
    if i > r || j > r + 1 {
        return Err(Error::IndexOutOfRange { index: if i > r { i as usize } else { j as usize }, len: (r + 2) as usize });
    }
    let base = FracSeries::local_base(r);
    let (om, et) = omega_eta(r, i, j);
    let one = FracSeries::one(base, order);
    let x = FracSeries::u(base, order).scale(&om);
    let one_plus_x = &one + &x;
    let uv = &FracSeries::u(base, order) * &FracSeries::v(base, order);
    let h = &uv.scale(&(&et * &om)) * &one_plus_x.binomial_power(&rat(-1, r as i64 + 2))?;
    let xi = &FracSeries::v(base, order).scale(&et) * &one_plus_x.binomial_power(&rat(r as i64 + 1, r as i64 + 2))?;
    Ok(EigenPair { i, j, h, xi })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenFailure {
    pub i: u32,
    pub j: u32,
    pub relation: String,
    /// (u-exponent, v-exponent) of the lowest nonzero residual term
    pub exponent: (u32, u32),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenRelationReport {
    pub r: u32,
    pub order: u32,
    pub pairs_checked: usize,
    pub failures: Vec<EigenFailure>,
}

impl EigenRelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn into_result(self) -> Result<Self> {
        match self.failures.first() {
            None => Ok(self),
            Some(f) => Err(Error::Verification(format!(
                "eigenvalue pair ({}, {}) violates {} at exponent {:?}",
                f.i, f.j, f.relation, f.exponent
            ))),
        }
    }
}

/// Residuals of both Batyrev relations at one eigenvalue pair.
pub fn check_pair(r: u32, pair: &EigenPair) -> Vec<EigenFailure> {
    let base = pair.h.base();
    let order = pair.h.order();
    let q1s = FracSeries::q1(base, order);
    let q2s = FracSeries::q2(base, order);
    let diff = &pair.xi - &pair.h;
    let rel1 = &pair.h.pow(r + 1) - &(&q1s * &diff.pow(r + 1));
    let rel2 = &(&pair.xi * &diff.pow(r + 1)) - &q2s;
    let mut out = Vec::new();
    for (name, res) in [("h^{r+1} - q1 (xi-h)^{r+1}", rel1), ("xi (xi-h)^{r+1} - q2", rel2)] {
        if let Some(e) = res.leading_exponent() {
            out.push(EigenFailure { i: pair.i, j: pair.j, relation: name.to_string(), exponent: e });
        }
    }
    out
}

pub fn verify_eigen_relations(r: u32, order: u32) -> Result<EigenRelationReport> {
    if order < 1 {
        return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
    }
    let mut failures = Vec::new();
    let mut pairs = 0;
    for i in 0..=r {
        for j in 0..=r + 1 {
            let p = eigen_formulas(r, i, j, order)?;
            failures.extend(check_pair(r, &p));
            pairs += 1;
        }
    }
    Ok(EigenRelationReport { r, order, pairs_checked: pairs, failures })
}

pub fn mult_matrices_commute(r: u32) -> bool {
    let h = quantum_mult_matrix(r, Divisor::H);
    let x = quantum_mult_matrix(r, Divisor::Xi);
    mat_mul(&h, &x) == mat_mul(&x, &h)
}

/// Expand a quantum coefficient as a series in u = q1^{1/(r+1)}, v = q2^{1/(r+2)}.
pub fn qcoeff_series(r: u32, c: &QCoeff, order: u32) -> Result<FracSeries> {
    let base = FracSeries::local_base(r);
    let mut acc = FracSeries::zero(base, order);
    for (e, f) in c.terms() {
        if *e < 0 {
            return Err(Error::InvalidArgument("negative q2 power".into()));
        }
        let ser = f.series_expand((order / (r + 1)) as usize)?;
        for (k, ck) in ser.iter().enumerate() {
            acc = &acc + &FracSeries::monomial(base, order, ck.clone(), k as u32 * (r + 1), *e as u32 * (r + 2));
        }
    }
    Ok(acc)
}

/// Product of all closed-form h-eigenvalues against det(h*), as series.
pub fn eigenvalue_product_matches_det(r: u32, order: u32) -> Result<bool> {
    let base = FracSeries::local_base(r);
    let mut prod = FracSeries::one(base, order);
    for i in 0..=r {
        for j in 0..=r + 1 {
            prod = &prod * &eigen_formulas(r, i, j, order)?.h;
        }
    }
    let det = determinant(&quantum_mult_matrix(r, Divisor::H));
    // (-1)^{(r+1)(r+2)} = 1: the rank is even
    Ok(prod == qcoeff_series(r, &det, order)?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaussianRational {
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub re: Rational,
    #[serde(with = "crate::algebra::rational::serde_rational")]
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_cyc(&self) -> CycNumber {
        CycNumber::from_coeffs(4, vec![self.re.clone(), self.im.clone()])
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemisimplicityReport {
    pub r: u32,
    pub q1: GaussianRational,
    pub q2: GaussianRational,
    /// closed-form h-eigenvalues as (re, im), ordered by (i, j)
    pub eigenvalues: Vec<(f64, f64)>,
    pub min_gap: f64,
    pub max_mismatch: f64,
    pub distinct_tol: f64,
    pub agreement_tol: f64,
}

/// Closed-form h-eigenvalues at a numeric point, principal branches.
pub fn numeric_h_eigenvalues(r: u32, q1v: Complex64, q2v: Complex64) -> Vec<Complex64> {
    let u = q1v.powf(1.0 / (r as f64 + 1.0));
    let v = q2v.powf(1.0 / (r as f64 + 2.0));
    let mut out = Vec::new();
    for i in 0..=r {
        for j in 0..=r + 1 {
            let (om, et) = omega_eta(r, i, j);
            let x = om.to_complex() * u;
            let h = et.to_complex() * x * v * (Complex64::one() + x).powf(-1.0 / (r as f64 + 2.0));
            out.push(h);
        }
    }
    out
}

fn poly_eval_c(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Simultaneous Weierstrass iteration for all roots of a monic polynomial.
fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let bound = 1.0 + coeffs[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(1.0, 0.4);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * (0.5 * bound)).collect();
    for _ in 0..2000 {
        let mut moved: f64 = 0.0;
        for i in 0..n {
            let mut den = Complex64::one();
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            if den.norm() == 0.0 {
                continue;
            }
            let step = poly_eval_c(coeffs, z[i]).0 / den;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * bound {
            break;
        }
    }
    z
}

/// Roots of a monic polynomial (lowest degree first) via the companion matrix.
pub fn monic_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let mut comp = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = Complex64::one();
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i];
    }
    let eig: Vec<Complex64> = match Schur::try_new(comp, f64::EPSILON, 10_000) {
        Some(schur) => schur.eigenvalues().expect("complex Schur form is triangular").iter().copied().collect(),
        // the QR iteration can stall on companion matrices
        None => durand_kerner(coeffs),
    };
    eig.iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..20 {
                let (p, dp) = poly_eval_c(coeffs, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                z -= step;
                if step.norm() < 1e-17 * (1.0 + z.norm()) {
                    break;
                }
            }
            z
        })
        .collect()
}

/// Numeric certificate that h* is semisimple at a sample point.
pub fn semisimplicity_certificate(
    r: u32,
    q1v: &GaussianRational,
    q2v: &GaussianRational,
    distinct_tol: f64,
    agreement_tol: f64,
) -> Result<SemisimplicityReport> {
    if q1v.is_zero() || q2v.is_zero() {
        return Err(Error::InvalidArgument("sample point must have q1, q2 nonzero".into()));
    }
    let eig = numeric_h_eigenvalues(r, q1v.to_complex(), q2v.to_complex());
    let mut min_gap = f64::INFINITY;
    for a in 0..eig.len() {
        for b in a + 1..eig.len() {
            min_gap = min_gap.min((eig[a] - eig[b]).norm());
        }
    }
    if min_gap <= distinct_tol {
        return Err(Error::NotCertified(format!("eigenvalue gap {min_gap:e} within tolerance {distinct_tol:e}")));
    }
    // exact characteristic polynomial at the sample, in Q(i)
    let (a, b) = (q1v.to_cyc(), q2v.to_cyc());
    let m = quantum_mult_matrix(r, Divisor::H);
    let mut ms: Matrix<CycNumber> = Vec::new();
    for row in &m {
        ms.push(row.iter().map(|c| eval_qcoeff(c, &a, &b)).collect::<Result<Vec<_>>>()?);
    }
    let cp: Vec<Complex64> = berkowitz(&ms).iter().map(CycNumber::to_complex).collect();
    let mut roots = monic_roots(&cp);
    let mut max_mismatch: f64 = 0.0;
    for e in &eig {
        let (k, d) = roots
            .iter()
            .enumerate()
            .map(|(k, z)| (k, (z - e).norm()))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("root count matches rank");
        max_mismatch = max_mismatch.max(d);
        roots.swap_remove(k);
    }
    if max_mismatch > agreement_tol {
        return Err(Error::Verification(format!(
            "formula-vs-matrix discrepancy: spectra differ by {max_mismatch:e} > {agreement_tol:e}"
        )));
    }
    Ok(SemisimplicityReport {
        r,
        q1: q1v.clone(),
        q2: q2v.clone(),
        eigenvalues: eig.iter().map(|z| (z.re, z.im)).collect(),
        min_gap,
        max_mismatch,
        distinct_tol,
        agreement_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(c: i64) -> RatFunc {
        RatFunc::from_int(c)
    }

    #[test]
    fn root_finders_agree() {
        // (x - 1)(x - 2)(x + i) = x^3 + (i - 3) x^2 + (2 - 3i) x + 2i
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let coeffs = [c(0.0, 2.0), c(2.0, -3.0), c(-3.0, 1.0), c(1.0, 0.0)];
        let want = [c(1.0, 0.0), c(2.0, 0.0), c(0.0, -1.0)];
        for roots in [monic_roots(&coeffs), durand_kerner(&coeffs)] {
            for w in &want {
                assert!(roots.iter().any(|z| (z - w).norm() < 1e-9), "{roots:?}");
            }
        }
    }

    #[test]
    fn classical_limit_is_nilpotent() {
        for r in 1..4 {
            for d in [Divisor::H, Divisor::Xi] {
                let m = quantum_mult_matrix(r, d);
                // set q1 = q2 = 0
                let zero = CycNumber::zero();
                let m0: Matrix<CycNumber> =
                    m.iter().map(|row| row.iter().map(|c| eval_qcoeff(c, &zero, &zero).unwrap()).collect()).collect();
                let cp = berkowitz(&m0);
                assert!(cp[..cp.len() - 1].iter().all(CycNumber::is_zero));
            }
        }
    }

    #[test]
    fn hand_computed_entries() {
        // r=1: xi * xi^2 has constant coefficient q2 (1 - q1)
        let r = 1;
        let red = quantum_reduce(r, BTreeMap::from([((0, 3), QCoeff::one())]));
        let want = LaurentRat::monomial(1, &rf(1) - &q1());
        assert_eq!(red.coeffs[&(0, 0)], want);
        assert_eq!(red.coeffs[&(1, 2)], QCoeff::from_int(2));
        // r=2: q2 (1 + q1)
        let red = quantum_reduce(2, BTreeMap::from([((0, 4), QCoeff::one())]));
        assert_eq!(red.coeffs[&(0, 0)], LaurentRat::monomial(1, &rf(1) + &q1()));
        // h^{r+1} xi = q1 q2
        let red = quantum_reduce(2, BTreeMap::from([((3, 1), QCoeff::one())]));
        assert_eq!(red.coeffs, BTreeMap::from([((0, 0), q1q2())]));
    }

    #[test]
    fn relations_hold_in_normal_form() {
        for r in 1..4u32 {
            // h^{r+1} - q1 (xi - h)^{r+1}
            let mut p: BTreeMap<(u32, u32), QCoeff> = BTreeMap::new();
            add_into(&mut p, (r + 1, 0), QCoeff::one());
            for k in 0..=r + 1 {
                let c = binomial_q(r as i64 + 1, k as i64) * int(sign_pow((r + 1 - k) as i64));
                add_into(&mut p, (r + 1 - k, k), LaurentRat::from_ratfunc(q1().scale(&CycNumber::from_rational(-c))));
            }
            assert!(quantum_reduce(r, p).coeffs.is_empty(), "r={r}");
        }
    }

    #[test]
    fn commute() {
        for r in 1..4 {
            assert!(mult_matrices_commute(r), "r={r}");
        }
    }

    #[test]
    fn eigen_relations() {
        let rep = verify_eigen_relations(1, 6).unwrap();
        assert_eq!(rep.pairs_checked, 6);
        assert!(rep.passed());
        let rep = verify_eigen_relations(2, 5).unwrap();
        assert_eq!(rep.pairs_checked, 12);
        assert!(rep.passed());
        assert!(verify_eigen_relations(1, 0).is_err());
    }

    #[test]
    fn leading_terms() {
        let p = eigen_formulas(2, 0, 0, 0).unwrap();
        assert_eq!(p.xi.leading_exponent(), Some((0, 1)));
        assert_eq!(p.xi.coeff(0, 1), CycNumber::one());
        let p = eigen_formulas(2, 1, 2, 3).unwrap();
        let (om, et) = omega_eta(2, 1, 2);
        assert_eq!(p.h.leading_exponent(), Some((1, 1)));
        assert_eq!(p.h.coeff(1, 1), &om * &et);
    }

    #[test]
    fn corrupted_pair_fails_at_leading_exponent() {
        let r = 1;
        let mut p = eigen_formulas(r, 0, 1, 6).unwrap();
        p.h = -&p.h;
        let f = check_pair(r, &p);
        assert_eq!(f.len(), 2);
        // h^2 picks no sign, but xi - h changes at its leading h-term u v
        assert_eq!(f[1].exponent.1, 3);
    }

    #[test]
    fn det_matches_product() {
        assert!(eigenvalue_product_matches_det(1, 12).unwrap());
    }

    #[test]
    fn certificate() {
        let s1 = GaussianRational::real(rat(3, 10));
        let s2 = GaussianRational::real(rat(7, 10));
        let rep = semisimplicity_certificate(1, &s1, &s2, 1e-6, 1e-9).unwrap();
        assert_eq!(rep.eigenvalues.len(), 6);
        assert!(rep.min_gap > 1e-6);
        let rep = semisimplicity_certificate(2, &GaussianRational::new(rat(1, 5), rat(1, 10)), &s2, 1e-6, 1e-9).unwrap();
        assert_eq!(rep.eigenvalues.len(), 12);
        let z = GaussianRational::real(rat(0, 1));
        assert!(semisimplicity_certificate(1, &z, &z, 1e-6, 1e-9).is_err());
    }

    #[test]
    fn companion_roots() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let c: Vec<Complex64> = [6.0, -7.0, 0.0, 1.0].iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut roots: Vec<f64> = monic_roots(&c).iter().map(|z| z.re).collect();
        roots.sort_by(f64::total_cmp);
        assert!((roots[0] + 3.0).abs() < 1e-12 && (roots[1] - 1.0).abs() < 1e-12 && (roots[2] - 2.0).abs() < 1e-12);
    }
}
