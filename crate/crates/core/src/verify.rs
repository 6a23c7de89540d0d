//! Verification suites: each identity becomes one `Check` with a stable id,
//! a descriptive anchor, its parameters, a status and a residual string.

use std::collections::BTreeMap;
use std::fmt::Display;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::laurent::EquivScalar;
use crate::algebra::ratfunc::RatFunc;
use crate::algebra::rational::{display_rational, int, rat, Rational};
use crate::batyrev::{self, GaussianRational};
use crate::coh_ring::{self, CohClass, HXPoly};
use crate::error::{Error, Result};
use crate::flop;
use crate::givental::connection::{
    connection_derivation_form, connection_display_form, connection_form, xi_constant, xi_constant_closed_form,
    BranchFlips,
};
use crate::givental::frame::{
    canonical_basis, eval_du, delta_product_closed_form, epsilon_norm_closed_form, epsilon_pairing,
    term_c_minus_one, term_c_minus_one_closed_form, term_log_delta, term_log_delta_closed_form,
};
use crate::givental::genus_one::{
    genus_one_closed_form, genus_one_form, genus_one_table, genus_one_table_closed_form, kappa,
};
use crate::givental::rmatrix::{
    is_zero_scalar_matrix, r1_diagonal, r1_diagonal_closed_form, r1_offdiagonal, r1_offdiagonal_display_form,
    r_matrix_recursion, unitarity_residual, with_identity,
};
use crate::givental::spectrum::{
    build_spectrum, char_poly_residual, charpoly_closed_form, charpoly_coefficients, equiv_pairing,
    lemma_zero_value, pairing_by_localization, CanonicalFrame,
};
use crate::weyl::{self, LoopOperator, LoopSpace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub anchor: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub residual: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub suite: String,
    pub entries: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), entries: Vec::new(), timing_ms: None }
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.entries.iter().filter(|c| !c.passed()).collect()
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.entries.extend(checks);
    }
}

type Params = BTreeMap<String, String>;

fn params(kv: &[(&str, String)]) -> Params {
    kv.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Outcome of one identity: pass flag and residual text.
pub type Outcome = Result<(bool, String)>;

pub fn run_check(id: &str, anchor: &str, p: Params, f: impl FnOnce() -> Outcome) -> Check {
    let (status, residual) = match f() {
        Ok((true, res)) => (Status::Pass, res),
        Ok((false, res)) => (Status::Fail, res),
        Err(e) => (Status::Error, e.to_string()),
    };
    Check { id: id.to_string(), anchor: anchor.to_string(), params: p, status, residual }
}

fn zero_ok() -> Outcome {
    Ok((true, "0".into()))
}

/// Pass iff every pair agrees; residual names the first offender.
fn all_equal<T: PartialEq + Display>(pairs: impl IntoIterator<Item = (String, T, T)>) -> Outcome {
    for (label, got, want) in pairs {
        if got != want {
            return Ok((false, format!("{label}: got {got}, expected {want}")));
        }
    }
    zero_ok()
}

fn all_true(items: impl IntoIterator<Item = (String, bool)>) -> Outcome {
    for (label, ok) in items {
        if !ok {
            return Ok((false, format!("fails at {label}")));
        }
    }
    zero_ok()
}

fn frame_for(r: u32) -> CanonicalFrame {
    canonical_basis(build_spectrum(r))
}

/// Every closed-form identity of the q-line computation for one r.
pub fn appendix_checks(r: u32, rmatrix_order: usize, dmax: u32) -> Vec<Check> {
    let pr = || params(&[("r", r.to_string())]);
    let frame = frame_for(r);
    let n = frame.size();
    let mut out = Vec::new();

    out.push(run_check("charpoly-roots", "characteristic-polynomial-of-p", pr(), || {
        all_true((0..n).map(|i| (format!("i={i}"), char_poly_residual(&frame, i).is_zero())))
    }));
    out.push(run_check("charpoly-symmetric-functions", "elementary-symmetric-functions-of-p", pr(), || {
        let e = charpoly_coefficients(r);
        all_equal((1..=r + 1).map(|k| (format!("k={k}"), e[k as usize - 1].clone(), charpoly_closed_form(r, k))))
    }));
    out.push(run_check("charpoly-in-q-of-g", "symmetric-functions-polynomial-in-g", pr(), || {
        for (k, e) in charpoly_coefficients(r).iter().enumerate() {
            let in_q = e
                .decimate(r as usize + 1)
                .ok_or_else(|| Error::Verification("coefficient is not a function of q".into()))?;
            let p = flop::g_polynomial_of(r, &in_q)?;
            if p.degree() != Some(1) {
                return Ok((false, format!("k={}: {p}", k + 1)));
            }
        }
        zero_ok()
    }));
    out.push(run_check("equivariant-pairing", "equivariant-poincare-pairing", pr(), || {
        all_equal((0..=r + 1).map(|d| (format!("d={d}"), equiv_pairing(r, d, 0), pairing_by_localization(r, d))))
    }));
    out.push(run_check("pairing-vanishing", "pairing-vanishing-lemma", pr(), || {
        let mut items: Vec<(String, EquivScalar, EquivScalar)> =
            (0..r).map(|k| (format!("k={k}"), lemma_zero_value(r, k), EquivScalar::zero())).collect();
        items.push((
            format!("k={r}"),
            lemma_zero_value(r, r),
            EquivScalar::monomial(-(2 * r as i32 + 1), RatFunc::one()),
        ));
        all_equal(items)
    }));
    out.push(run_check("idempotent-duality", "du-j-of-epsilon-i-is-kronecker", pr(), || {
        let mut items = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { EquivScalar::one() } else { EquivScalar::zero() };
                items.push((format!("({i},{j})"), eval_du(&frame, j, &frame.epsilon[i]), want));
            }
        }
        all_equal(items)
    }));
    out.push(run_check("idempotent-orthogonality", "idempotents-orthogonal-with-closed-norms", pr(), || {
        let mut items = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { epsilon_norm_closed_form(&frame, i) } else { EquivScalar::zero() };
                items.push((format!("({i},{j})"), epsilon_pairing(&frame, i, j), want));
            }
        }
        all_equal(items)
    }));
    out.push(run_check("delta-i", "delta-i-inverse-norms", pr(), || {
        let mut items: Vec<(String, EquivScalar, EquivScalar)> = (0..n)
            .map(|i| (format!("i={i}"), &epsilon_pairing(&frame, i, i) * &frame.delta[i], EquivScalar::one()))
            .collect();
        let prod = frame.delta.iter().fold(EquivScalar::one(), |acc, d| &acc * d);
        items.push(("product".into(), prod, delta_product_closed_form(r)));
        all_equal(items)
    }));
    out.push(run_check("term-log-delta", "first-term-dlog-delta", pr(), || {
        all_equal([("dt".to_string(), term_log_delta(&frame), term_log_delta_closed_form(r))])
    }));
    out.push(run_check("term-c-minus-one", "second-term-c-minus-one", pr(), || {
        let t = term_c_minus_one(&frame)?;
        let higher_vanish = t.limits.iter().skip(1).all(RatFunc::is_zero);
        if !higher_vanish {
            return Ok((false, "a dt_k component with k >= 2 survives lambda -> 0".into()));
        }
        all_equal([("dt_1".to_string(), t.on_line, term_c_minus_one_closed_form(r))])
    }));

    let conn = connection_form(&frame, &BranchFlips::new());
    out.push(run_check("connection-skew", "connection-zero-diagonal-antisymmetric", pr(), || {
        let c = conn.as_ref().map_err(Clone::clone)?;
        let mut items = Vec::new();
        for i in 0..n {
            items.push((format!("({i},{i})"), c[i][i].is_zero()));
            for j in 0..n {
                items.push((format!("({i},{j})+({j},{i})"), (&c[i][j] + &c[j][i]).is_zero()));
            }
        }
        all_true(items)
    }));
    out.push(run_check("connection-closed-form", "connection-entries-negated-display", pr(), || {
        let c = conn.as_ref().map_err(Clone::clone)?;
        let mut items = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let v = c[i][j].non_equivariant_limit()?;
                items.push((format!("({i},{j}) derivation"), v.clone(), connection_derivation_form(&frame, i, j)));
                items.push((format!("({i},{j}) display"), v, RatFunc::constant(-connection_display_form(r, i, j))));
            }
        }
        all_equal(items)
    }));
    let off = conn.as_ref().map_err(Clone::clone).and_then(|c| r1_offdiagonal(&frame, c));
    out.push(run_check("r1-offdiagonal", "r1-off-diagonal-negated-display", pr(), || {
        let o = off.as_ref().map_err(Clone::clone)?;
        let mut items = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    items.push((format!("({i},{j})"), o[i][j].clone(), -r1_offdiagonal_display_form(&frame, i, j)));
                }
            }
        }
        all_equal(items)
    }));
    out.push(run_check("r1-diagonal", "r1-diagonal-closed-form", pr(), || {
        let o = off.as_ref().map_err(Clone::clone)?;
        let d = r1_diagonal(&frame, o)?;
        all_equal((0..n).map(|i| (format!("i={i}"), d[i].clone(), r1_diagonal_closed_form(&frame, i))))
    }));
    out.push(run_check("xi-constant", "roots-of-unity-key-constant", pr(), || {
        let x = xi_constant(r)?;
        if !x.vanishing_sum_zero {
            return Ok((false, "companion sum is nonzero".into()));
        }
        all_equal([("Xi".to_string(), RatDisplay(x.value), RatDisplay(xi_constant_closed_form(r)))])
    }));

    let form = genus_one_form(r, &BranchFlips::new());
    out.push(run_check("genus-one-potential", "genus-one-potential-closed-form", pr(), || {
        let f = form.as_ref().map_err(Clone::clone)?;
        all_equal([
            (
                "constant".to_string(),
                RatFunc::from_rational(f.constant_at_zero.clone()),
                RatFunc::from_rational(rat(-(r as i64) * (r as i64 + 1), 48)),
            ),
            ("remainder".to_string(), f.remainder.clone(), flop::g_function(r).f.scale_rational(&kappa(r))),
            ("coefficient".to_string(), f.coefficient.clone(), genus_one_closed_form(r)),
        ])
    }));
    out.push(run_check(
        "genus-one-table",
        "genus-one-degree-d-invariants",
        params(&[("r", r.to_string()), ("dmax", dmax.to_string())]),
        || {
            let f = form.as_ref().map_err(Clone::clone)?;
            let t = genus_one_table(f, dmax)?;
            all_equal(t.rows.iter().map(|row| {
                (
                    format!("d={}", row.degree),
                    RatDisplay(row.value.clone()),
                    RatDisplay(genus_one_table_closed_form(r, row.degree)),
                )
            }))
        },
    ));
    out.push(run_check("branch-independence", "genus-one-independent-of-square-root-branch", pr(), || {
        let base = form.as_ref().map_err(Clone::clone)?;
        let mut items = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut flips = BranchFlips::new();
                flips.insert((i, j));
                let g = genus_one_form(r, &flips)?;
                items.push((format!("flip ({i},{j})"), g.coefficient, base.coefficient.clone()));
            }
        }
        all_equal(items)
    }));

    let pn = params(&[("r", r.to_string()), ("order", rmatrix_order.to_string())]);
    let rec = conn.as_ref().map_err(Clone::clone).and_then(|c| r_matrix_recursion(&frame, c, rmatrix_order));
    out.push(run_check("rmatrix-first-order", "recursion-reproduces-r1", pn.clone(), || {
        let rs = rec.as_ref().map_err(Clone::clone)?;
        let o = off.as_ref().map_err(Clone::clone)?;
        let d = r1_diagonal(&frame, o)?;
        let mut items = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { d[i].clone() } else { o[i][j].clone() };
                items.push((format!("({i},{j})"), rs[0].entries[i][j].clone(), want));
            }
        }
        all_equal(items)
    }));
    out.push(run_check("rmatrix-unitarity", "r-matrix-unitarity", pn.clone(), || {
        let rs = rec.as_ref().map_err(Clone::clone)?;
        let all = with_identity(&frame, rs);
        all_true((1..=rmatrix_order).map(|k| (format!("n={k}"), is_zero_scalar_matrix(&unitarity_residual(&all, k)))))
    }));
    out.push(run_check("rmatrix-constants", "r-matrix-diagonal-constants", pn, || {
        let rs = rec.as_ref().map_err(Clone::clone)?;
        let mut parts = Vec::new();
        for o in rs {
            let nonzero: Vec<String> = o
                .diagonal_constants
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| format!("c{i}={c}"))
                .collect();
            if o.order % 2 == 1 && !nonzero.is_empty() {
                return Ok((false, format!("odd order {} has constants", o.order)));
            }
            parts.push(format!("n={}: [{}]", o.order, nonzero.join(", ")));
        }
        Ok((true, parts.join("; ")))
    }));
    out
}

/// Rational wrapper printing as p/q.
#[derive(Clone, PartialEq)]
struct RatDisplay(Rational);

impl Display for RatDisplay {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", display_rational(&self.0))
    }
}

/// Flop identities for one r: reflection, delta polynomials, reciprocal
/// symmetry, n-point invariance and the one-point defect.
pub fn flop_checks(r: u32, max_m: u32, max_n: u32, series_order: usize, with_pipeline: bool) -> Vec<Check> {
    let pr = || params(&[("r", r.to_string())]);
    let mut out = Vec::new();
    out.push(run_check("g-reflection", "g-plus-g-inverse-is-sign", pr(), || {
        Ok((flop::verify_reflection(r), flop::reflection_sum(r).to_string()))
    }));
    let pm = params(&[("r", r.to_string()), ("max_m", max_m.to_string()), ("order", series_order.to_string())]);
    out.push(run_check("delta-g-polynomial", "delta-g-integral-polynomial-in-g", pm.clone(), || {
        for m in 0..=max_m {
            let c = flop::check_delta_g_polynomial(r, m, series_order)?;
            if !c.passed() {
                return Ok((false, format!("m={m}: {c:?}")));
            }
        }
        Ok((true, format!("p_1 = {}", flop::delta_g_polynomial(r, 1))))
    }));
    out.push(run_check("reciprocal-symmetry", "delta-m-g-reciprocal-parity", pm, || {
        all_true((0..=max_m).map(|m| (format!("m={m}"), flop::reciprocal_antisymmetry(r, m))))
    }));
    let quantum = if with_pipeline {
        genus_one_form(r, &BranchFlips::new()).map(|f| f.remainder)
    } else {
        Ok(flop::g_function(r).f.scale_rational(&kappa(r)))
    };
    let source = if with_pipeline { "pipeline" } else { "closed-form" };
    out.push(run_check(
        "genus-one-npoint",
        "genus-one-n-point-flop-invariance",
        params(&[("r", r.to_string()), ("max_n", max_n.to_string()), ("source", source.into())]),
        || {
            let q = quantum.as_ref().map_err(Clone::clone)?;
            let mut items = Vec::new();
            for n in 2..=max_n {
                items.push((format!("n={n}"), flop::genus1_npoint_invariance(q, n)?));
            }
            all_true(items)
        },
    ));
    out.push(run_check(
        "genus-one-onepoint-defect",
        "genus-one-one-point-defect-cancels",
        params(&[("r", r.to_string()), ("source", source.into())]),
        || {
            let q = quantum.as_ref().map_err(Clone::clone)?;
            let (d, rep) = flop::genus1_onepoint_defect_with(r, q, &Rational::zero())?;
            Ok((d.is_zero(), format!("{} (chern {}, quantum {})", rep.total, rep.chern_number, rep.quantum)))
        },
    ));
    out.push(run_check("flop-involution", "flop-transform-involution", pr(), || {
        let g = flop::RingRElement::g(r);
        let x = &flop::RingRElement::q_gamma(r).mul(&g.pow(2)) + &flop::RingRElement::q_l(r);
        Ok((x.flop_transform().flop_transform() == x && g.flop_transform().flop_transform() == g, "0".into()))
    }));
    out.push(run_check("delta-closure", "delta-preserves-polynomials-in-g", pr(), || {
        let mut x = flop::RingRElement::g(r);
        for m in 0..=max_m {
            let want = flop::RingRElement::from_gpoly(r, &flop::delta_g_polynomial(r, m), 0, 0);
            if x != want {
                return Ok((false, format!("m={m}: {x}")));
            }
            x = x.delta();
        }
        zero_ok()
    }));
    if r == 1 {
        out.push(run_check("fp-generating", "higher-genus-generating-function-invariance", pr(), || {
            let mut items = Vec::new();
            let mut m = 1;
            while m <= max_m.max(1) {
                items.push((format!("m={m}"), flop::fp_generating_invariance(m, series_order)?));
                m += 2;
            }
            all_true(items)
        }));
    }
    out
}

/// Batyrev ring: eigenvalue relations, commuting operators and the
/// numeric semisimplicity certificate at a sample point.
pub fn batyrev_checks(
    r: u32,
    order: u32,
    sample: &(GaussianRational, GaussianRational),
    distinct_tol: f64,
    agreement_tol: f64,
) -> Vec<Check> {
    let pr = || params(&[("r", r.to_string())]);
    let mut out = Vec::new();
    out.push(run_check(
        "eigen-relations",
        "closed-form-eigenvalues-solve-quantum-relations",
        params(&[("r", r.to_string()), ("order", order.to_string())]),
        || {
            let rep = batyrev::verify_eigen_relations(r, order)?;
            let expected = ((r + 1) * (r + 2)) as usize;
            if rep.pairs_checked != expected {
                return Ok((false, format!("checked {} pairs, expected {expected}", rep.pairs_checked)));
            }
            match rep.failures.first() {
                None => Ok((true, format!("{} pairs", rep.pairs_checked))),
                Some(f) => Ok((false, format!("{f:?}"))),
            }
        },
    ));
    out.push(run_check("operators-commute", "quantum-multiplications-commute", pr(), || {
        Ok((batyrev::mult_matrices_commute(r), "0".into()))
    }));
    out.push(run_check(
        "eigen-product",
        "eigenvalue-product-is-determinant",
        params(&[("r", r.to_string()), ("order", order.min(4).to_string())]),
        || Ok((batyrev::eigenvalue_product_matches_det(r, order.min(4))?, "0".into())),
    ));
    out.push(run_check(
        "semisimplicity",
        "distinct-eigenvalues-certify-semisimplicity",
        params(&[
            ("r", r.to_string()),
            ("q1", format!("{},{}", display_rational(&sample.0.re), display_rational(&sample.0.im))),
            ("q2", format!("{},{}", display_rational(&sample.1.re), display_rational(&sample.1.im))),
            ("distinct_tol", format!("{distinct_tol:e}")),
            ("agreement_tol", format!("{agreement_tol:e}")),
        ]),
        || {
            let rep = batyrev::semisimplicity_certificate(r, &sample.0, &sample.1, distinct_tol, agreement_tol)?;
            Ok((true, format!("min gap {:e}, max mismatch {:e}", rep.min_gap, rep.max_mismatch)))
        },
    ));
    out
}

/// Classical ring of the local model.
pub fn cohomology_checks(r: u32) -> Vec<Check> {
    let pr = || params(&[("r", r.to_string())]);
    let mut out = Vec::new();
    out.push(run_check("ring-relations", "cohomology-ring-relations", pr(), || {
        let rel = &HXPoly::xi() * &(&HXPoly::xi() - &HXPoly::h()).pow(r + 1);
        Ok((
            coh_ring::reduce(r, &HXPoly::h().pow(r + 1)).is_zero() && coh_ring::reduce(r, &rel).is_zero(),
            "0".into(),
        ))
    }));
    out.push(run_check("integration-normalization", "top-class-integrates-to-one", pr(), || {
        let top = coh_ring::reduce(r, &HXPoly::monomial(int(1), r, r + 1));
        all_equal([("h^r xi^(r+1)".to_string(), RatDisplay(top.integrate()), RatDisplay(int(1)))])
    }));
    out.push(run_check("ring-rank", "basis-size-and-unimodular-pairing", pr(), || {
        let n = coh_ring::basis(r).len();
        let det = coh_ring::pairing_determinant(r);
        let unimodular = det == int(1) || det == int(-1);
        Ok((n == ((r + 1) * (r + 2)) as usize && unimodular, format!("rank {n}, det {}", display_rational(&det))))
    }));
    out.push(run_check("first-chern-class", "first-chern-class-and-crepancy", pr(), || {
        let c1 = coh_ring::chern_class(r, 1);
        let want = CohClass::xi(r).scale(&int(r as i64 + 2));
        let on_line = (&c1 * &coh_ring::line_class(r)).integrate();
        Ok((c1 == want && on_line.is_zero(), format!("c1 = {c1}, c1.l = {}", display_rational(&on_line))))
    }));
    out.push(run_check("chern-flop-identity", "chern-number-against-flop-divisor", pr(), || {
        all_equal([(
            "c_2r.(2h - xi)".to_string(),
            RatDisplay(coh_ring::chern_flop_identity(r)),
            RatDisplay(int(-(r as i64) - 1)),
        )])
    }));
    out.push(run_check("genus-one-degree-zero", "degree-zero-genus-one-one-point", pr(), || {
        // h - F h = 2h - xi
        let alpha = &CohClass::h(r) - &coh_ring::flop_divisor_h(r);
        all_equal([(
            "alpha = 2h - xi".to_string(),
            RatDisplay(coh_ring::genus1_degree0(&alpha)),
            RatDisplay(rat(r as i64 + 1, 24)),
        )])
    }));
    if r == 1 {
        out.push(run_check("c3-minus-c2c1", "c3-minus-c2-c1-flop-side", pr(), || {
            let v = coh_ring::c3_minus_c2c1(1)?;
            let w = coh_ring::c3_minus_c2c1_flop_side(1)?;
            Ok((v == w, display_rational(&v)))
        }));
    }
    out
}

/// Toy quantization on an N-dimensional H with cutoff K.
pub fn quantization_checks(dim: usize, cutoff: usize) -> Vec<Check> {
    let pk = || params(&[("dim", dim.to_string()), ("cutoff", cutoff.to_string())]);
    let mut out = Vec::new();
    out.push(run_check(
        "string-hamiltonian",
        "hamiltonian-of-z-inverse",
        params(&[("dim", "1".into()), ("cutoff", cutoff.to_string())]),
        || {
            let s = LoopSpace::new(1, cutoff);
            let h = weyl::hamiltonian_of(&s, &LoopOperator::scalar_power(1, -1, int(1)))?;
            let want = weyl::string_hamiltonian_closed_form(cutoff);
            Ok((h == want, h.to_string()))
        },
    ));
    out.push(run_check("symplectic-operators", "infinitesimally-symplectic-examples", pk(), || {
        let s = LoopSpace::new(dim, cutoff);
        Ok((
            weyl::is_infinitesimal_symplectic(&s, &LoopOperator::scalar_power(dim, -1, int(1)))
                && weyl::is_infinitesimal_symplectic(&s, &LoopOperator::scalar_power(dim, 1, int(1)))
                && !weyl::is_infinitesimal_symplectic(&s, &LoopOperator::identity(dim)),
            "0".into(),
        ))
    }));
    out.push(run_check("cocycle-table", "quantization-cocycle", pk(), || {
        let t = weyl::cocycle_table(&LoopSpace::new(dim, cutoff))?;
        match t.iter().find(|e| !e.passed()) {
            None => Ok((true, format!("{} pairs", t.len()))),
            Some(e) => Ok((
                false,
                format!("{} , {}: {} vs {}", e.first, e.second, display_rational(&e.value), display_rational(&e.expected)),
            )),
        }
    }));
    out.push(run_check("lie-homomorphism", "hamiltonian-map-is-lie-homomorphism", pk(), || {
        let margin = 3.min(cutoff);
        let s = LoopSpace::new(dim, cutoff);
        let mut ops = vec![LoopOperator::scalar_power(dim, -1, int(1))];
        let sym: Vec<Vec<Rational>> =
            (0..dim).map(|i| (0..dim).map(|j| int((i + j + 1) as i64)).collect()).collect();
        ops.push(LoopOperator::matrix_power(1, sym));
        if dim >= 2 {
            let anti: Vec<Vec<Rational>> = (0..dim)
                .map(|i| (0..dim).map(|j| int(j as i64 - i as i64)).collect())
                .collect();
            ops.push(LoopOperator::matrix_power(0, anti.clone()));
            ops.push(LoopOperator::matrix_power(-2, anti));
        }
        for a in &ops {
            for b in &ops {
                let res = weyl::lie_homomorphism_residual(&s, a, b, margin)?;
                if !res.is_zero() {
                    return Ok((false, res.to_string()));
                }
            }
        }
        Ok((true, format!("{} operators, margin {margin}", ops.len())))
    }));
    out.push(run_check("dilaton-shift", "dilaton-shift-unit-direction", pk(), || {
        let s = LoopSpace::new(dim, cutoff.max(1));
        let zero = weyl::LoopVector::zero(&s);
        let t = weyl::dilaton_shift(&s, &zero, 0)?;
        let back = weyl::dilaton_unshift(&s, &t, 0)?;
        Ok((t.coeffs().len() == 1 && t.coeff(0, 1) == int(1) && back == zero, "0".into()))
    }));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_check_statuses() {
        let p = Params::new();
        assert_eq!(run_check("a", "b", p.clone(), || Ok((true, "0".into()))).status, Status::Pass);
        assert_eq!(run_check("a", "b", p.clone(), || Ok((false, "1".into()))).status, Status::Fail);
        let e = run_check("a", "b", p, || Err(Error::DivisionByZero));
        assert_eq!(e.status, Status::Error);
        assert!(!e.residual.is_empty());
    }

    #[test]
    fn suites_pass_small() {
        for c in appendix_checks(1, 2, 4)
            .into_iter()
            .chain(flop_checks(1, 3, 3, 12, true))
            .chain(flop_checks(2, 3, 3, 12, false))
            .chain(batyrev_checks(1, 4, &(GaussianRational::real(rat(3, 10)), GaussianRational::real(rat(7, 10))), 1e-6, 1e-9))
            .chain(cohomology_checks(1))
            .chain(cohomology_checks(2))
            .chain(quantization_checks(2, 2))
        {
            assert!(c.passed(), "{c:?}");
        }
    }

    #[test]
    fn report_serializes() {
        let r = Report::new("empty");
        let v = serde_json_roundtrip(&r);
        assert_eq!(v, r);
    }

    fn serde_json_roundtrip(r: &Report) -> Report {
        serde_json::from_str(&serde_json::to_string(r).unwrap()).unwrap()
    }
}
