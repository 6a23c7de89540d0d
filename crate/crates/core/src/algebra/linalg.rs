//! Small dense matrices over the exact scalar types.

use num_traits::{One, Zero};

use super::cyclotomic::CycNumber;
use super::laurent::LaurentRat;
use super::ratfunc::RatFunc;
use super::rational::Rational;
use crate::error::{Error, Result};

pub type Matrix<T> = Vec<Vec<T>>;

pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn radd(&self, o: &Self) -> Self;
    fn rsub(&self, o: &Self) -> Self;
    fn rmul(&self, o: &Self) -> Self;
    fn rneg(&self) -> Self {
        self.zero_like().rsub(self)
    }
}

pub trait Field: Ring {
    fn rinv(&self) -> Option<Self>;
}

macro_rules! ring_via_ops {
    ($t:ty, $zero:expr, $one:expr, $isz:expr) => {
        impl Ring for $t {
            fn zero_like(&self) -> Self {
                $zero
            }
            fn one_like(&self) -> Self {
                $one
            }
            fn is_zero_elem(&self) -> bool {
                $isz(self)
            }
            fn radd(&self, o: &Self) -> Self {
                self + o
            }
            fn rsub(&self, o: &Self) -> Self {
                self - o
            }
            fn rmul(&self, o: &Self) -> Self {
                self * o
            }
        }
    };
}

ring_via_ops!(Rational, Rational::zero(), Rational::one(), |x: &Rational| x.is_zero());
ring_via_ops!(CycNumber, CycNumber::zero(), CycNumber::one(), |x: &CycNumber| x.is_zero());
ring_via_ops!(RatFunc, RatFunc::zero(), RatFunc::one(), |x: &RatFunc| x.is_zero());
ring_via_ops!(LaurentRat, LaurentRat::zero(), LaurentRat::one(), |x: &LaurentRat| x.is_zero());

impl Field for Rational {
    fn rinv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| self.recip())
    }
}

impl Field for CycNumber {
    fn rinv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
}

impl Field for RatFunc {
    fn rinv(&self) -> Option<Self> {
        self.checked_inv().ok()
    }
}

pub fn identity<T: Ring>(n: usize, like: &T) -> Matrix<T> {
    (0..n).map(|i| (0..n).map(|j| if i == j { like.one_like() } else { like.zero_like() }).collect()).collect()
}

pub fn mat_mul<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = a[i][0].zero_like();
                    for l in 0..k {
                        if !a[i][l].is_zero_elem() && !b[l][j].is_zero_elem() {
                            acc = acc.radd(&a[i][l].rmul(&b[l][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_sub<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.rsub(q)).collect()).collect()
}

pub fn mat_add<T: Ring>(a: &Matrix<T>, b: &Matrix<T>) -> Matrix<T> {
    a.iter().zip(b).map(|(x, y)| x.iter().zip(y).map(|(p, q)| p.radd(q)).collect()).collect()
}

pub fn transpose<T: Clone>(a: &Matrix<T>) -> Matrix<T> {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

pub fn is_zero_matrix<T: Ring>(a: &Matrix<T>) -> bool {
    a.iter().all(|row| row.iter().all(Ring::is_zero_elem))
}

/// Coefficients of det(x I - A), lowest degree first (monic). Division free,
/// so it works over any commutative ring.
pub fn berkowitz<T: Ring>(a: &Matrix<T>) -> Vec<T> {
    let n = a.len();
    assert!(n > 0, "empty matrix");
    let one = a[0][0].one_like();
    // highest degree first while building
    let mut p = vec![one.clone()];
    for k in 0..n {
        let d = &a[k][k];
        let mut col = vec![one.clone(), d.rneg()];
        let mut v: Vec<T> = (0..k).map(|i| a[i][k].clone()).collect();
        for _ in 0..k {
            let mut rv = one.zero_like();
            for (l, vl) in v.iter().enumerate() {
                rv = rv.radd(&a[k][l].rmul(vl));
            }
            col.push(rv.rneg());
            v = (0..k)
                .map(|i| {
                    let mut acc = one.zero_like();
                    for (l, vl) in v.iter().enumerate() {
                        acc = acc.radd(&a[i][l].rmul(vl));
                    }
                    acc
                })
                .collect();
        }
        let mut np = vec![one.zero_like(); k + 2];
        for (i, slot) in np.iter_mut().enumerate() {
            for (j, pj) in p.iter().enumerate().take(i + 1) {
                *slot = slot.radd(&col[i - j].rmul(pj));
            }
        }
        p = np;
    }
    p.reverse();
    p
}

pub fn determinant<T: Ring>(a: &Matrix<T>) -> T {
    let cp = berkowitz(a);
    if a.len() % 2 == 0 {
        cp[0].clone()
    } else {
        cp[0].rneg()
    }
}

/// Gauss-Jordan inverse over a field.
pub fn inverse<T: Field>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let n = a.len();
    let like = a[0][0].clone();
    let mut m: Matrix<T> = a.clone();
    let mut inv = identity(n, &like);
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero_elem()).ok_or(Error::DivisionByZero)?;
        m.swap(col, piv);
        inv.swap(col, piv);
        let s = m[col][col].rinv().ok_or(Error::DivisionByZero)?;
        for j in 0..n {
            m[col][j] = m[col][j].rmul(&s);
            inv[col][j] = inv[col][j].rmul(&s);
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero_elem() {
                continue;
            }
            let f = m[r][col].clone();
            for j in 0..n {
                let t = m[col][j].rmul(&f);
                m[r][j] = m[r][j].rsub(&t);
                let t = inv[col][j].rmul(&f);
                inv[r][j] = inv[r][j].rsub(&t);
            }
        }
    }
    Ok(inv)
}

/// Solve A x = b over Q in the least-squares-free sense: returns a solution
/// if the (possibly overdetermined) system is consistent.
pub fn solve_rational(a: &Matrix<Rational>, b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Matrix<Rational> = a.iter().zip(b).map(|(row, bi)| {
        let mut r = row.clone();
        r.push(bi.clone());
        r
    }).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let s = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &s;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in 0..=cols {
                    let t = &m[row][j] * &f;
                    m[r][j] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (i, c) in pivots.iter().enumerate() {
        x[*c] = m[i][cols].clone();
    }
    Some(x)
}
