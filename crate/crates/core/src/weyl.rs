//! Quantization of quadratic hamiltonians on a truncated symplectic loop space
//! H((z^{-1})) with z-exponents in [-K-1, K].

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::algebra::linalg::{inverse, Matrix};
use crate::algebra::rational::{display_rational, int, serde_rational, sign_pow, Rational};
use crate::error::{Error, Result};

/// Darboux index (i, k): basis vector T_i, z-level k >= 0.
pub type Idx = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopSpace {
    pub dim: usize,
    pub cutoff: usize,
    pub metric: Matrix<Rational>,
    metric_inv: Matrix<Rational>,
}

impl LoopSpace {
    /// Orthonormal metric.
    pub fn new(dim: usize, cutoff: usize) -> Self {
        let id: Matrix<Rational> =
            (0..dim).map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        LoopSpace { dim, cutoff, metric: id.clone(), metric_inv: id }
    }

    pub fn with_metric(cutoff: usize, metric: Matrix<Rational>) -> Result<Self> {
        let dim = metric.len();
        if metric.iter().any(|row| row.len() != dim) {
            return Err(Error::InvalidArgument("metric must be square".into()));
        }
        for i in 0..dim {
            for j in 0..dim {
                if metric[i][j] != metric[j][i] {
                    return Err(Error::InvalidArgument("metric must be symmetric".into()));
                }
            }
        }
        let metric_inv = inverse(&metric).map_err(|_| Error::InvalidArgument("metric is degenerate".into()))?;
        Ok(LoopSpace { dim, cutoff, metric, metric_inv })
    }

    pub fn min_exp(&self) -> i32 {
        -(self.cutoff as i32) - 1
    }

    pub fn max_exp(&self) -> i32 {
        self.cutoff as i32
    }

    pub fn contains_exp(&self, k: i32) -> bool {
        (self.min_exp()..=self.max_exp()).contains(&k)
    }

    /// All (i, exponent) slots.
    pub fn slots(&self) -> Vec<(usize, i32)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for k in self.min_exp()..=self.max_exp() {
                out.push((i, k));
            }
        }
        out
    }

    pub fn indices(&self) -> Vec<Idx> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for k in 0..=self.cutoff {
                out.push((i, k));
            }
        }
        out
    }

    /// Vector with coordinate q^i_k = 1, all others 0.
    pub fn q_vector(&self, (i, k): Idx) -> LoopVector {
        LoopVector::basis(self, i, k as i32)
    }

    /// Vector with coordinate p^i_k = 1, all others 0:
    /// (-1)^{k+1} sum_j (g^{-1})_{ji} T_j z^{-1-k}.
    pub fn p_vector(&self, (i, k): Idx) -> LoopVector {
        let mut v = LoopVector::zero(self);
        let s = int(sign_pow(k as i64 + 1));
        for j in 0..self.dim {
            v.add_to(j, -1 - k as i32, &s * &self.metric_inv[j][i]);
        }
        v
    }

    /// Darboux coordinates (q, p) of a vector.
    pub fn coordinates(&self, f: &LoopVector) -> (BTreeMap<Idx, Rational>, BTreeMap<Idx, Rational>) {
        let mut q = BTreeMap::new();
        let mut p = BTreeMap::new();
        for (i, k) in self.indices() {
            let qv = f.coeff(i, k as i32);
            if !qv.is_zero() {
                q.insert((i, k), qv);
            }
            let mut pv = Rational::zero();
            for j in 0..self.dim {
                pv += &self.metric[i][j] * f.coeff(j, -1 - k as i32);
            }
            pv *= int(sign_pow(k as i64 + 1));
            if !pv.is_zero() {
                p.insert((i, k), pv);
            }
        }
        (q, p)
    }
}

/// Finite sum of c T_i z^k within the cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopVector {
    pub dim: usize,
    pub cutoff: usize,
    coeffs: BTreeMap<(usize, i32), Rational>,
}

impl LoopVector {
    pub fn zero(space: &LoopSpace) -> Self {
        LoopVector { dim: space.dim, cutoff: space.cutoff, coeffs: BTreeMap::new() }
    }

    /// T_i z^k; panics outside the space.
    pub fn basis(space: &LoopSpace, i: usize, k: i32) -> Self {
        assert!(i < space.dim && space.contains_exp(k), "basis vector outside the truncated space");
        let mut v = Self::zero(space);
        v.coeffs.insert((i, k), Rational::one());
        v
    }

    pub fn coeff(&self, i: usize, k: i32) -> Rational {
        self.coeffs.get(&(i, k)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<(usize, i32), Rational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn in_range(&self, k: i32) -> bool {
        k >= -(self.cutoff as i32) - 1 && k <= self.cutoff as i32
    }

    /// Adds c T_i z^k; terms beyond the cutoff are dropped.
    pub fn add_to(&mut self, i: usize, k: i32, c: Rational) {
        if c.is_zero() || !self.in_range(k) {
            return;
        }
        let e = self.coeffs.entry((i, k)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&(i, k));
        }
    }

    pub fn add(&self, other: &LoopVector) -> LoopVector {
        let mut out = self.clone();
        for ((i, k), c) in &other.coeffs {
            out.add_to(*i, *k, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LoopVector {
        let mut out = self.clone();
        out.coeffs = self.coeffs.iter().filter(|_| !c.is_zero()).map(|(k, v)| (*k, v * c)).collect();
        out
    }
}

fn check_compatible(space: &LoopSpace, f: &LoopVector) -> Result<()> {
    if f.dim != space.dim || f.cutoff != space.cutoff {
        return Err(Error::InvalidArgument(format!(
            "vector of shape (N={}, K={}) used in space (N={}, K={})",
            f.dim, f.cutoff, space.dim, space.cutoff
        )));
    }
    Ok(())
}

/// Omega(f, g) = Res_{z=0} (f(-z), g(z)).
pub fn symplectic_form(space: &LoopSpace, f: &LoopVector, g: &LoopVector) -> Result<Rational> {
    check_compatible(space, f)?;
    check_compatible(space, g)?;
    let mut acc = Rational::zero();
    for ((i, a), fa) in &f.coeffs {
        for j in 0..space.dim {
            let gb = g.coeff(j, -1 - a);
            if gb.is_zero() || space.metric[*i][j].is_zero() {
                continue;
            }
            acc += int(sign_pow(*a as i64)) * fa * &gb * &space.metric[*i][j];
        }
    }
    Ok(acc)
}

/// Matrix-valued Laurent polynomial sum_m A_m z^m acting by multiplication.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopOperator {
    pub dim: usize,
    terms: BTreeMap<i32, Matrix<Rational>>,
}

impl LoopOperator {
    pub fn zero(dim: usize) -> Self {
        LoopOperator { dim, terms: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar_power(dim, 0, Rational::one())
    }

    /// c z^m times the identity matrix.
    pub fn scalar_power(dim: usize, m: i32, c: Rational) -> Self {
        let mat = (0..dim).map(|i| (0..dim).map(|j| if i == j { c.clone() } else { Rational::zero() }).collect()).collect();
        Self::matrix_power(m, mat)
    }

    /// M z^m.
    pub fn matrix_power(m: i32, mat: Matrix<Rational>) -> Self {
        let dim = mat.len();
        let mut out = Self::zero(dim);
        out.add_term(m, mat);
        out
    }

    pub fn terms(&self) -> &BTreeMap<i32, Matrix<Rational>> {
        &self.terms
    }

    fn add_term(&mut self, m: i32, mat: Matrix<Rational>) {
        let dim = self.dim;
        let e = self.terms.entry(m).or_insert_with(|| vec![vec![Rational::zero(); dim]; dim]);
        for i in 0..dim {
            for j in 0..dim {
                e[i][j] += &mat[i][j];
            }
        }
        if e.iter().all(|row| row.iter().all(Zero::is_zero)) {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &LoopOperator) -> LoopOperator {
        let mut out = self.clone();
        for (m, mat) in &other.terms {
            out.add_term(*m, mat.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> LoopOperator {
        let mut out = Self::zero(self.dim);
        for (m, mat) in &self.terms {
            out.add_term(*m, mat.iter().map(|row| row.iter().map(|x| x * c).collect()).collect());
        }
        out
    }

    pub fn mul(&self, other: &LoopOperator) -> LoopOperator {
        let n = self.dim;
        let mut out = Self::zero(n);
        for (m1, a) in &self.terms {
            for (m2, b) in &other.terms {
                let prod = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| (0..n).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
                            .collect()
                    })
                    .collect();
                out.add_term(m1 + m2, prod);
            }
        }
        out
    }

    /// [A, B] = AB - BA
    pub fn commutator(&self, other: &LoopOperator) -> LoopOperator {
        self.mul(other).add(&other.mul(self).scale(&-Rational::one()))
    }

    /// A f, dropping terms beyond the cutoff.
    pub fn apply(&self, f: &LoopVector) -> LoopVector {
        let mut out = LoopVector { dim: f.dim, cutoff: f.cutoff, coeffs: BTreeMap::new() };
        for (m, mat) in &self.terms {
            for ((j, k), c) in &f.coeffs {
                for (i, row) in mat.iter().enumerate() {
                    if !row[*j].is_zero() {
                        out.add_to(i, k + m, &row[*j] * c);
                    }
                }
            }
        }
        out
    }
}

/// Omega(A f, g) + Omega(f, A g) = 0 on all basis pairs within the cutoff.
pub fn is_infinitesimal_symplectic(space: &LoopSpace, a: &LoopOperator) -> bool {
    if a.dim != space.dim {
        return false;
    }
    let basis: Vec<LoopVector> = space.slots().into_iter().map(|(i, k)| LoopVector::basis(space, i, k)).collect();
    let images: Vec<LoopVector> = basis.iter().map(|v| a.apply(v)).collect();
    for (f, af) in basis.iter().zip(&images) {
        for (g, ag) in basis.iter().zip(&images) {
            let s = symplectic_form(space, af, g).unwrap() + symplectic_form(space, f, ag).unwrap();
            if !s.is_zero() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Var {
    P(Idx),
    Q(Idx),
}

impl Var {
    pub fn idx(&self) -> Idx {
        match self {
            Var::P(i) | Var::Q(i) => *i,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::P((i, k)) => write!(f, "p{i}_{k}"),
            Var::Q((i, k)) => write!(f, "q{i}_{k}"),
        }
    }
}

fn ordered(a: Var, b: Var) -> (Var, Var) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Quadratic form sum c x_a x_b over Darboux variables, keys ordered (a <= b),
/// with P before Q so mixed terms read p q.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuadHamiltonian {
    terms: BTreeMap<(Var, Var), Rational>,
}

impl QuadHamiltonian {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Rational, a: Var, b: Var) -> Self {
        let mut h = Self::zero();
        h.add_term(a, b, c);
        h
    }

    pub fn pp(a: Idx, b: Idx) -> Self {
        Self::monomial(Rational::one(), Var::P(a), Var::P(b))
    }

    pub fn qq(a: Idx, b: Idx) -> Self {
        Self::monomial(Rational::one(), Var::Q(a), Var::Q(b))
    }

    pub fn pq(a: Idx, b: Idx) -> Self {
        Self::monomial(Rational::one(), Var::P(a), Var::Q(b))
    }

    pub fn terms(&self) -> &BTreeMap<(Var, Var), Rational> {
        &self.terms
    }

    pub fn coeff(&self, a: Var, b: Var) -> Rational {
        self.terms.get(&ordered(a, b)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, a: Var, b: Var, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = ordered(a, b);
        let e = self.terms.entry(key).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((a, b), c) in &other.terms {
            out.add_term(*a, *b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for ((a, b), v) in &self.terms {
            out.add_term(*a, *b, v * c);
        }
        out
    }

    /// Symmetric pp block.
    pub fn pp_block(&self) -> BTreeMap<(Idx, Idx), Rational> {
        self.block(|a, b| matches!((a, b), (Var::P(_), Var::P(_))))
    }

    /// pq block, keyed (p index, q index).
    pub fn pq_block(&self) -> BTreeMap<(Idx, Idx), Rational> {
        self.block(|a, b| matches!((a, b), (Var::P(_), Var::Q(_))))
    }

    /// Symmetric qq block.
    pub fn qq_block(&self) -> BTreeMap<(Idx, Idx), Rational> {
        self.block(|a, b| matches!((a, b), (Var::Q(_), Var::Q(_))))
    }

    fn block(&self, pick: impl Fn(&Var, &Var) -> bool) -> BTreeMap<(Idx, Idx), Rational> {
        self.terms.iter().filter(|((a, b), _)| pick(a, b)).map(|((a, b), c)| ((a.idx(), b.idx()), c.clone())).collect()
    }

    /// Linear form d/dx.
    fn partial(&self, x: Var) -> BTreeMap<Var, Rational> {
        let mut out: BTreeMap<Var, Rational> = BTreeMap::new();
        for ((a, b), c) in &self.terms {
            if *a == x && *b == x {
                *out.entry(x).or_insert_with(Rational::zero) += c * int(2);
            } else if *a == x {
                *out.entry(*b).or_insert_with(Rational::zero) += c.clone();
            } else if *b == x {
                *out.entry(*a).or_insert_with(Rational::zero) += c.clone();
            }
        }
        out
    }

    fn variables(&self) -> Vec<Idx> {
        let mut v: Vec<Idx> = self.terms.keys().flat_map(|(a, b)| [a.idx(), b.idx()]).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Drop every term involving a level k > `max_level`.
    pub fn restrict_levels(&self, max_level: usize) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            if a.idx().1 <= max_level && b.idx().1 <= max_level {
                out.add_term(*a, *b, c.clone());
            }
        }
        out
    }
}

impl fmt::Display for QuadHamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| if a == b { format!("{}*{a}^2", display_rational(c)) } else { format!("{}*{a}*{b}", display_rational(c)) })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn mul_linear(x: &BTreeMap<Var, Rational>, y: &BTreeMap<Var, Rational>) -> QuadHamiltonian {
    let mut out = QuadHamiltonian::zero();
    for (a, ca) in x {
        for (b, cb) in y {
            out.add_term(*a, *b, ca * cb);
        }
    }
    out
}

/// {P1, P2} = sum dP1/dp dP2/dq - dP2/dp dP1/dq
pub fn poisson_bracket(p1: &QuadHamiltonian, p2: &QuadHamiltonian) -> QuadHamiltonian {
    let mut idx = p1.variables();
    idx.extend(p2.variables());
    idx.sort();
    idx.dedup();
    let mut out = QuadHamiltonian::zero();
    for i in idx {
        let a = mul_linear(&p1.partial(Var::P(i)), &p2.partial(Var::Q(i)));
        let b = mul_linear(&p2.partial(Var::P(i)), &p1.partial(Var::Q(i)));
        out = out.add(&a).sub(&b);
    }
    out
}

/// P(A)(f) = Omega(A f, f) / 2 in Darboux coordinates. Terms with levels
/// beyond the cutoff are absent by truncation.
pub fn hamiltonian_of(space: &LoopSpace, a: &LoopOperator) -> Result<QuadHamiltonian> {
    if !is_infinitesimal_symplectic(space, a) {
        return Err(Error::InvalidArgument("operator is not infinitesimally symplectic".into()));
    }
    let mut vars: Vec<(Var, LoopVector)> = Vec::new();
    for idx in space.indices() {
        vars.push((Var::P(idx), space.p_vector(idx)));
        vars.push((Var::Q(idx), space.q_vector(idx)));
    }
    let images: Vec<LoopVector> = vars.iter().map(|(_, v)| a.apply(v)).collect();
    let half = Rational::new(1.into(), 2.into());
    let mut h = QuadHamiltonian::zero();
    for (x, (vx, _)) in vars.iter().enumerate() {
        for (vy, fy) in vars.iter() {
            let w = symplectic_form(space, &images[x], fy)?;
            if !w.is_zero() {
                h.add_term(*vx, *vy, &w * &half);
            }
        }
    }
    Ok(h)
}

/// [P(A1), P(A2)] vs P([A1, A2]) away from the cutoff: returns
/// P([A1, A2]) - {P(A1), P(A2)} restricted to levels <= K - margin.
pub fn lie_homomorphism_residual(
    space: &LoopSpace,
    a1: &LoopOperator,
    a2: &LoopOperator,
    margin: usize,
) -> Result<QuadHamiltonian> {
    if margin > space.cutoff {
        return Err(Error::InvalidArgument(format!("margin {margin} exceeds cutoff {}", space.cutoff)));
    }
    let lhs = hamiltonian_of(space, &a1.commutator(a2))?;
    let rhs = poisson_bracket(&hamiltonian_of(space, a1)?, &hamiltonian_of(space, a2)?);
    Ok(lhs.sub(&rhs).restrict_levels(space.cutoff - margin))
}

/// Polynomial in q^i_k with Laurent powers of hbar.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FockPolynomial {
    /// (hbar exponent, monomial) -> coefficient
    terms: BTreeMap<(i32, BTreeMap<Idx, u32>), Rational>,
}

impl FockPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut f = Self::zero();
        f.add_term(0, BTreeMap::new(), c);
        f
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(idx: Idx) -> Self {
        Self::monomial(Rational::one(), 0, &[(idx, 1)])
    }

    pub fn monomial(c: Rational, hbar: i32, vars: &[(Idx, u32)]) -> Self {
        let mut m = BTreeMap::new();
        for (i, e) in vars {
            if *e > 0 {
                *m.entry(*i).or_insert(0) += e;
            }
        }
        let mut f = Self::zero();
        f.add_term(hbar, m, c);
        f
    }

    pub fn terms(&self) -> &BTreeMap<(i32, BTreeMap<Idx, u32>), Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is a constant (hbar^0, no variables).
    pub fn as_scalar(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let ((h, m), c) = self.terms.iter().next().unwrap();
                (*h == 0 && m.is_empty()).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, hbar: i32, m: BTreeMap<Idx, u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (hbar, m);
        let e = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((h, m), c) in &other.terms {
            out.add_term(*h, m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for ((h, m), v) in &self.terms {
            out.add_term(*h, m.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((h1, m1), c1) in &self.terms {
            for ((h2, m2), c2) in &other.terms {
                let mut m = m1.clone();
                for (i, e) in m2 {
                    *m.entry(*i).or_insert(0) += e;
                }
                out.add_term(h1 + h2, m, c1 * c2);
            }
        }
        out
    }

    pub fn partial(&self, idx: Idx) -> Self {
        let mut out = Self::zero();
        for ((h, m), c) in &self.terms {
            if let Some(e) = m.get(&idx) {
                let mut m2 = m.clone();
                if *e == 1 {
                    m2.remove(&idx);
                } else {
                    m2.insert(idx, e - 1);
                }
                out.add_term(*h, m2, c * int(*e as i64));
            }
        }
        out
    }

    pub fn mul_var(&self, idx: Idx) -> Self {
        self.mul(&Self::var(idx))
    }

    pub fn mul_hbar(&self, e: i32) -> Self {
        let mut out = Self::zero();
        for ((h, m), c) in &self.terms {
            out.add_term(h + e, m.clone(), c.clone());
        }
        out
    }
}

impl fmt::Display for FockPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((h, m), c)| {
                let mut s = display_rational(c);
                if *h != 0 {
                    s.push_str(&format!("*hbar^{h}"));
                }
                for ((i, k), e) in m {
                    s.push_str(&if *e == 1 { format!("*q{i}_{k}") } else { format!("*q{i}_{k}^{e}") });
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The differential operator attached to a quadratic hamiltonian:
/// p p -> hbar d d, p_a q_b -> q_b d_a, q q -> q q / hbar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuantizedOperator {
    pub hamiltonian: QuadHamiltonian,
}

pub fn quantize(p: &QuadHamiltonian) -> QuantizedOperator {
    QuantizedOperator { hamiltonian: p.clone() }
}

impl QuantizedOperator {
    pub fn apply(&self, f: &FockPolynomial) -> FockPolynomial {
        let mut out = FockPolynomial::zero();
        for ((a, b), c) in self.hamiltonian.terms() {
            let g = match (a, b) {
                (Var::P(i), Var::P(j)) => f.partial(*j).partial(*i).mul_hbar(1),
                (Var::P(i), Var::Q(j)) => f.partial(*i).mul_var(*j),
                (Var::Q(i), Var::Q(j)) => f.mul_var(*i).mul_var(*j).mul_hbar(-1),
                (Var::Q(_), Var::P(_)) => unreachable!("keys are ordered with P first"),
            };
            out = out.add(&g.scale(c));
        }
        out
    }
}

/// Monomials of total degree <= 2 in the given variables, plus 1.
fn spanning_set(vars: &[Idx]) -> Vec<FockPolynomial> {
    let mut out = vec![FockPolynomial::one()];
    for (n, a) in vars.iter().enumerate() {
        out.push(FockPolynomial::var(*a));
        for b in &vars[n..] {
            out.push(FockPolynomial::var(*a).mul_var(*b));
        }
    }
    out
}

/// [P1^, P2^] - {P1, P2}^ on a spanning set; errors unless it is a scalar.
pub fn commutator_cocycle(p1: &QuadHamiltonian, p2: &QuadHamiltonian) -> Result<Rational> {
    let mut vars = p1.variables();
    vars.extend(p2.variables());
    vars.sort();
    vars.dedup();
    let (o1, o2, ob) = (quantize(p1), quantize(p2), quantize(&poisson_bracket(p1, p2)));
    let mut scalar: Option<Rational> = None;
    for f in spanning_set(&vars) {
        let d = o1.apply(&o2.apply(&f)).sub(&o2.apply(&o1.apply(&f))).sub(&ob.apply(&f));
        let c = match &scalar {
            Some(c) => c.clone(),
            None => {
                let c = d.as_scalar().ok_or_else(|| {
                    Error::Verification(format!("quantization defect is not a scalar: {d}"))
                })?;
                scalar = Some(c.clone());
                c
            }
        };
        if d != f.scale(&c) {
            return Err(Error::Verification(format!("quantization defect is not central on {f}: {d}")));
        }
    }
    Ok(scalar.unwrap_or_else(Rational::zero))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CocycleEntry {
    pub first: String,
    pub second: String,
    #[serde(with = "serde_rational")]
    pub value: Rational,
    #[serde(with = "serde_rational")]
    pub expected: Rational,
}

impl CocycleEntry {
    pub fn passed(&self) -> bool {
        self.value == self.expected
    }
}

fn kronecker(a: Idx, b: Idx) -> i64 {
    (a == b) as i64
}

/// The cocycle on every pair (p_a p_b, q_c q_d) and (q_c q_d, p_a p_b), a <= b,
/// c <= d, with expected value d_ac d_bd + d_ad d_bc (antisymmetric in order),
/// plus the vanishing pp/pp, qq/qq and pq pairs.
pub fn cocycle_table(space: &LoopSpace) -> Result<Vec<CocycleEntry>> {
    let idx = space.indices();
    let mut pairs = Vec::new();
    for (n, a) in idx.iter().enumerate() {
        for b in &idx[n..] {
            pairs.push((*a, *b));
        }
    }
    let mut out = Vec::new();
    for (a, b) in &pairs {
        for (c, d) in &pairs {
            let pp = QuadHamiltonian::pp(*a, *b);
            let qq = QuadHamiltonian::qq(*c, *d);
            let expected = int(kronecker(*a, *c) * kronecker(*b, *d) + kronecker(*a, *d) * kronecker(*b, *c));
            out.push(CocycleEntry {
                first: pp.to_string(),
                second: qq.to_string(),
                value: commutator_cocycle(&pp, &qq)?,
                expected: expected.clone(),
            });
            out.push(CocycleEntry {
                first: qq.to_string(),
                second: pp.to_string(),
                value: commutator_cocycle(&qq, &pp)?,
                expected: -expected,
            });
        }
    }
    for (a, b) in &pairs {
        for (c, d) in &pairs {
            for (h1, h2) in [
                (QuadHamiltonian::pp(*a, *b), QuadHamiltonian::pp(*c, *d)),
                (QuadHamiltonian::qq(*a, *b), QuadHamiltonian::qq(*c, *d)),
                (QuadHamiltonian::pq(*a, *b), QuadHamiltonian::qq(*c, *d)),
                (QuadHamiltonian::pp(*a, *b), QuadHamiltonian::pq(*c, *d)),
            ] {
                out.push(CocycleEntry {
                    first: h1.to_string(),
                    second: h2.to_string(),
                    value: commutator_cocycle(&h1, &h2)?,
                    expected: Rational::zero(),
                });
            }
        }
    }
    Ok(out)
}

/// t = q + z in the unit direction: t^unit_1 = q^unit_1 + 1.
pub fn dilaton_shift(space: &LoopSpace, q: &LoopVector, unit: usize) -> Result<LoopVector> {
    shift_by(space, q, unit, Rational::one())
}

pub fn dilaton_unshift(space: &LoopSpace, t: &LoopVector, unit: usize) -> Result<LoopVector> {
    shift_by(space, t, unit, -Rational::one())
}

fn shift_by(space: &LoopSpace, v: &LoopVector, unit: usize, c: Rational) -> Result<LoopVector> {
    check_compatible(space, v)?;
    if unit >= space.dim || space.cutoff < 1 {
        return Err(Error::InvalidArgument("dilaton shift needs a unit index < N and cutoff >= 1".into()));
    }
    let mut out = v.clone();
    out.add_to(unit, 1, c);
    Ok(out)
}

/// Expected P(z^{-1}) for N = 1: -q_0^2/2 - sum_{m < K} q_{m+1} p_m.
pub fn string_hamiltonian_closed_form(cutoff: usize) -> QuadHamiltonian {
    let mut h = QuadHamiltonian::monomial(Rational::new((-1).into(), 2.into()), Var::Q((0, 0)), Var::Q((0, 0)));
    for m in 0..cutoff {
        h.add_term(Var::P((0, m)), Var::Q((0, m + 1)), -Rational::one());
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::rat;
    use proptest::prelude::*;

    fn sp(n: usize, k: usize) -> LoopSpace {
        LoopSpace::new(n, k)
    }

    #[test]
    fn form_examples() {
        let s = sp(2, 3);
        let f = LoopVector::basis(&s, 1, 0);
        let g = LoopVector::basis(&s, 1, -1);
        assert_eq!(symplectic_form(&s, &f, &g).unwrap(), int(1));
        let f = LoopVector::basis(&s, 1, 1);
        let g = LoopVector::basis(&s, 1, -2);
        assert_eq!(symplectic_form(&s, &f, &g).unwrap(), int(-1));
        let other = LoopVector::basis(&sp(2, 2), 0, 0);
        assert!(symplectic_form(&s, &other, &g).is_err());
    }

    #[test]
    fn darboux_pairs() {
        let metric = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        for s in [sp(2, 2), LoopSpace::with_metric(2, metric).unwrap()] {
            for a in s.indices() {
                for b in s.indices() {
                    let d = int(kronecker(a, b));
                    assert_eq!(symplectic_form(&s, &s.p_vector(a), &s.q_vector(b)).unwrap(), d);
                    assert!(symplectic_form(&s, &s.p_vector(a), &s.p_vector(b)).unwrap().is_zero());
                    assert!(symplectic_form(&s, &s.q_vector(a), &s.q_vector(b)).unwrap().is_zero());
                }
                let (q, p) = s.coordinates(&s.p_vector(a));
                assert!(q.is_empty());
                assert_eq!(p.into_iter().collect::<Vec<_>>(), vec![(a, int(1))]);
            }
        }
        assert!(LoopSpace::with_metric(1, vec![vec![int(0)]]).is_err());
    }

    #[test]
    fn symplectic_examples() {
        let s = sp(1, 4);
        assert!(is_infinitesimal_symplectic(&s, &LoopOperator::scalar_power(1, -1, int(1))));
        assert!(is_infinitesimal_symplectic(&s, &LoopOperator::scalar_power(1, 1, int(1))));
        assert!(!is_infinitesimal_symplectic(&s, &LoopOperator::identity(1)));
        assert!(!is_infinitesimal_symplectic(&s, &LoopOperator::scalar_power(1, -2, int(1))));
        assert!(hamiltonian_of(&s, &LoopOperator::identity(1)).is_err());
    }

    #[test]
    fn string_hamiltonian() {
        for k in 1..=5 {
            let s = sp(1, k);
            let h = hamiltonian_of(&s, &LoopOperator::scalar_power(1, -1, int(1))).unwrap();
            assert_eq!(h, string_hamiltonian_closed_form(k), "K={k}: {h}");
        }
        assert!(hamiltonian_of(&sp(1, 3), &LoopOperator::zero(1)).unwrap().is_zero());
    }

    #[test]
    fn z_minus_two_with_antisymmetric_block() {
        let s = sp(2, 3);
        let j = vec![vec![int(0), int(1)], vec![int(-1), int(0)]];
        let a = LoopOperator::matrix_power(-2, j);
        let h = hamiltonian_of(&s, &a).unwrap();
        // q-q coupling between the two directions at levels 0 and 1
        assert!(!h.coeff(Var::Q((0, 0)), Var::Q((1, 1))).is_zero());
        assert!(!h.pq_block().is_empty());
    }

    #[test]
    fn weyl_table() {
        let q0 = (0, 0);
        let f = FockPolynomial::var(q0).mul_var(q0);
        let pp = quantize(&QuadHamiltonian::pp(q0, q0));
        assert_eq!(pp.apply(&f), FockPolynomial::monomial(int(2), 1, &[]));
        let qq = quantize(&QuadHamiltonian::qq(q0, q0));
        assert_eq!(qq.apply(&FockPolynomial::one()), FockPolynomial::monomial(int(1), -1, &[(q0, 2)]));
        let s = sp(1, 3);
        let h = hamiltonian_of(&s, &LoopOperator::scalar_power(1, -1, int(1))).unwrap();
        let op = quantize(&h);
        // applied to q_0: -q_0^2 q_0/(2 hbar) - q_1
        let got = op.apply(&FockPolynomial::var(q0));
        let want = FockPolynomial::monomial(rat(-1, 2), -1, &[(q0, 3)]).sub(&FockPolynomial::var((0, 1)));
        assert_eq!(got, want);
    }

    #[test]
    fn cocycle_examples() {
        let (a, b) = ((0, 0), (0, 1));
        assert_eq!(commutator_cocycle(&QuadHamiltonian::pp(a, a), &QuadHamiltonian::qq(a, a)).unwrap(), int(2));
        assert_eq!(commutator_cocycle(&QuadHamiltonian::pp(a, b), &QuadHamiltonian::qq(a, b)).unwrap(), int(1));
        assert_eq!(commutator_cocycle(&QuadHamiltonian::qq(a, b), &QuadHamiltonian::pp(a, b)).unwrap(), int(-1));
        assert!(commutator_cocycle(&QuadHamiltonian::pp(a, a), &QuadHamiltonian::pp(a, b)).unwrap().is_zero());
    }

    #[test]
    fn cocycle_table_small() {
        let t = cocycle_table(&sp(2, 1)).unwrap();
        assert!(t.iter().all(CocycleEntry::passed));
    }

    #[test]
    fn lie_homomorphism() {
        let s = sp(2, 6);
        let e = vec![vec![int(1), int(2)], vec![int(2), int(-1)]];
        let j = vec![vec![int(0), int(1)], vec![int(-1), int(0)]];
        let ops = [
            LoopOperator::scalar_power(2, -1, int(1)),
            LoopOperator::matrix_power(-2, j.clone()),
            LoopOperator::matrix_power(1, e),
            LoopOperator::matrix_power(0, j),
        ];
        for a1 in &ops {
            for a2 in &ops {
                let res = lie_homomorphism_residual(&s, a1, a2, 3).unwrap();
                assert!(res.is_zero(), "{res}");
            }
        }
    }

    #[test]
    fn dilaton() {
        let s = sp(2, 2);
        let zero = LoopVector::zero(&s);
        let t = dilaton_shift(&s, &zero, 0).unwrap();
        assert_eq!(t.coeffs().len(), 1);
        assert_eq!(t.coeff(0, 1), int(1));
        assert!(t.coeff(1, 1).is_zero());
        assert_eq!(dilaton_unshift(&s, &t, 0).unwrap(), zero);
        assert!(dilaton_shift(&sp(1, 0), &LoopVector::zero(&sp(1, 0)), 0).is_err());
    }

    proptest! {
        #[test]
        fn form_antisymmetric(xs in proptest::collection::vec(-4i64..5, 16), ys in proptest::collection::vec(-4i64..5, 16)) {
            let s = sp(2, 3);
            let slots = s.slots();
            let mut f = LoopVector::zero(&s);
            let mut g = LoopVector::zero(&s);
            for (n, (i, k)) in slots.iter().enumerate() {
                f.add_to(*i, *k, int(xs[n]));
                g.add_to(*i, *k, int(ys[n]));
            }
            let a = symplectic_form(&s, &f, &g).unwrap();
            let b = symplectic_form(&s, &g, &f).unwrap();
            prop_assert_eq!(a, -b);
            prop_assert!(symplectic_form(&s, &f, &f).unwrap().is_zero());
            // nondegenerate: pairing with the Darboux partners recovers the coordinates
            let (q, p) = s.coordinates(&f);
            for idx in s.indices() {
                let qv = q.get(&idx).cloned().unwrap_or_else(Rational::zero);
                let pv = p.get(&idx).cloned().unwrap_or_else(Rational::zero);
                prop_assert_eq!(symplectic_form(&s, &s.p_vector(idx), &f).unwrap(), qv);
                prop_assert_eq!(symplectic_form(&s, &f, &s.q_vector(idx)).unwrap(), pv);
            }
        }
    }
}
