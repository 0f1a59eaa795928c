//! Bivariate integer polynomials, Sylvester resultants by fraction-free
//! (Bareiss) elimination, and gcd over `Z[y][x]`.

use super::IntPoly;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Commutative ring operations needed by fraction-free elimination.
pub trait ExactRing: Clone + PartialEq {
    fn r_zero() -> Self;
    fn r_one() -> Self;
    fn r_is_zero(&self) -> bool;
    fn r_mul(&self, o: &Self) -> Self;
    fn r_sub(&self, o: &Self) -> Self;
    fn r_neg(&self) -> Self;
    /// Quotient when the division is known to be exact.
    fn r_exact_div(&self, o: &Self) -> Self;
}

impl ExactRing for BigInt {
    fn r_zero() -> Self {
        Zero::zero()
    }
    fn r_one() -> Self {
        One::one()
    }
    fn r_is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_neg(&self) -> Self {
        -self
    }
    fn r_exact_div(&self, o: &Self) -> Self {
        self / o
    }
}

impl ExactRing for IntPoly {
    fn r_zero() -> Self {
        IntPoly::zero()
    }
    fn r_one() -> Self {
        IntPoly::one()
    }
    fn r_is_zero(&self) -> bool {
        IntPoly::is_zero(self)
    }
    fn r_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn r_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn r_neg(&self) -> Self {
        -self
    }
    fn r_exact_div(&self, o: &Self) -> Self {
        IntPoly::exact_div(self, o).expect("inexact division in fraction-free elimination")
    }
}

impl ExactRing for BiPoly {
    fn r_zero() -> Self {
        BiPoly::zero()
    }
    fn r_one() -> Self {
        BiPoly::constant(BigInt::one())
    }
    fn r_is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
    fn r_mul(&self, o: &Self) -> Self {
        BiPoly::mul(self, o)
    }
    fn r_sub(&self, o: &Self) -> Self {
        BiPoly::sub(self, o)
    }
    fn r_neg(&self) -> Self {
        BiPoly::neg(self)
    }
    fn r_exact_div(&self, o: &Self) -> Self {
        BiPoly::exact_div(self, o).expect("inexact division in fraction-free elimination")
    }
}

/// Determinant by Bareiss elimination with row pivoting.
pub fn det_bareiss<R: ExactRing>(mut m: Vec<Vec<R>>) -> R {
    let n = m.len();
    if n == 0 {
        return R::r_one();
    }
    let mut sign_neg = false;
    let mut prev = R::r_one();
    for k in 0..n - 1 {
        if m[k][k].r_is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].r_is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign_neg = !sign_neg;
                }
                None => return R::r_zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = m[i][j].r_mul(&m[k][k]).r_sub(&m[i][k].r_mul(&m[k][j]));
                m[i][j] = if prev == R::r_one() { v } else { v.r_exact_div(&prev) };
            }
            m[i][k] = R::r_zero();
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign_neg {
        d.r_neg()
    } else {
        d
    }
}

/// Sylvester resultant of `a`, `b` given by ascending coefficient lists
/// (trailing zeros already removed, both nonempty).
pub fn sylvester_resultant<R: ExactRing>(a: &[R], b: &[R]) -> R {
    let m = a.len() - 1;
    let n = b.len() - 1;
    if m == 0 && n == 0 {
        return R::r_one();
    }
    if m == 0 {
        return pow_ring(&a[0], n);
    }
    if n == 0 {
        return pow_ring(&b[0], m);
    }
    let size = m + n;
    let mut mat = vec![vec![R::r_zero(); size]; size];
    for i in 0..n {
        for (k, c) in a.iter().rev().enumerate() {
            mat[i][i + k] = c.clone();
        }
    }
    for i in 0..m {
        for (k, c) in b.iter().rev().enumerate() {
            mat[n + i][i + k] = c.clone();
        }
    }
    det_bareiss(mat)
}

fn pow_ring<R: ExactRing>(a: &R, k: usize) -> R {
    let mut acc = R::r_one();
    for _ in 0..k {
        acc = acc.r_mul(a);
    }
    acc
}

/// Pseudo-remainder of ascending coefficient lists over an integral domain.
fn prem_generic<R: ExactRing>(a: &[R], d: &[R]) -> Vec<R> {
    let dd = d.len() - 1;
    let lc = &d[dd];
    let mut r: Vec<R> = a.to_vec();
    trim(&mut r);
    while r.len() > dd && !r.is_empty() {
        let rd = r.len() - 1;
        let top = r[rd].clone();
        let shift = rd - dd;
        for c in r.iter_mut() {
            *c = c.r_mul(lc);
        }
        for (i, c) in d.iter().enumerate() {
            r[i + shift] = r[i + shift].r_sub(&top.r_mul(c));
        }
        trim(&mut r);
    }
    r
}

fn trim<R: ExactRing>(v: &mut Vec<R>) {
    while v.last().is_some_and(|c| c.r_is_zero()) {
        v.pop();
    }
}

/// Which variable a resultant eliminates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eliminate {
    X,
    Y,
}

/// Polynomial in `x`, `y` stored as `sum_i rows[i](y) x^i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    rows: Vec<IntPoly>,
}

impl BiPoly {
    pub fn new(mut rows: Vec<IntPoly>) -> Self {
        while rows.last().is_some_and(|r| r.is_zero()) {
            rows.pop();
        }
        BiPoly { rows }
    }

    pub fn zero() -> Self {
        BiPoly { rows: Vec::new() }
    }

    pub fn constant(c: BigInt) -> Self {
        BiPoly::new(vec![IntPoly::constant(c)])
    }

    /// Polynomial in `x` alone.
    pub fn from_x(p: &IntPoly) -> Self {
        BiPoly::new(p.coeffs().iter().map(|c| IntPoly::constant(c.clone())).collect())
    }

    /// Polynomial in `y` alone.
    pub fn from_y(p: &IntPoly) -> Self {
        BiPoly::new(vec![p.clone()])
    }

    /// Build from `(deg_x, deg_y, coefficient)` triples.
    pub fn from_terms(terms: &[(usize, usize, i64)]) -> Self {
        let mut out = BiPoly::zero();
        for &(i, j, c) in terms {
            out = out.add(&BiPoly::term(BigInt::from(c), i, j));
        }
        out
    }

    pub fn term(c: BigInt, i: usize, j: usize) -> Self {
        let mut rows = vec![IntPoly::zero(); i + 1];
        rows[i] = IntPoly::monomial(c, j);
        BiPoly::new(rows)
    }

    pub fn rows(&self) -> &[IntPoly] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> IntPoly {
        self.rows.get(i).cloned().unwrap_or_else(IntPoly::zero)
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.rows.get(i).map_or_else(BigInt::zero, |r| r.coeff(j))
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn deg_x(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    pub fn deg_y(&self) -> usize {
        self.rows.iter().map(|r| r.deg()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.deg_x() == 0 && self.deg_y() == 0
    }

    /// Exchange the roles of `x` and `y`.
    pub fn swap(&self) -> BiPoly {
        let dy = self.deg_y();
        let mut rows = Vec::with_capacity(dy + 1);
        for j in 0..=dy {
            rows.push(IntPoly::new(self.rows.iter().map(|r| r.coeff(j)).collect()));
        }
        BiPoly::new(rows)
    }

    pub fn add(&self, o: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(o.rows.len());
        BiPoly::new((0..n).map(|i| &self.row(i) + &o.row(i)).collect())
    }

    pub fn sub(&self, o: &BiPoly) -> BiPoly {
        let n = self.rows.len().max(o.rows.len());
        BiPoly::new((0..n).map(|i| &self.row(i) - &o.row(i)).collect())
    }

    pub fn neg(&self) -> BiPoly {
        BiPoly::new(self.rows.iter().map(|r| -r).collect())
    }

    pub fn mul(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero();
        }
        let mut rows = vec![IntPoly::zero(); self.rows.len() + o.rows.len() - 1];
        for (i, a) in self.rows.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.rows.iter().enumerate() {
                rows[i + j] = &rows[i + j] + &(a * b);
            }
        }
        BiPoly::new(rows)
    }

    pub fn scale_y(&self, p: &IntPoly) -> BiPoly {
        BiPoly::new(self.rows.iter().map(|r| r * p).collect())
    }

    pub fn pow(&self, k: u32) -> BiPoly {
        let mut acc = BiPoly::constant(One::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient in `Z[x, y]`, if any.
    pub fn exact_div(&self, d: &BiPoly) -> Option<BiPoly> {
        assert!(!d.is_zero(), "division by zero bivariate polynomial");
        if self.is_zero() {
            return Some(BiPoly::zero());
        }
        if self.deg_x() < d.deg_x() {
            return None;
        }
        let dd = d.deg_x();
        let lc = &d.rows[dd];
        let mut r = self.rows.clone();
        let mut q = vec![IntPoly::zero(); self.deg_x() - dd + 1];
        for shift in (0..=self.deg_x() - dd).rev() {
            let top = &r[shift + dd];
            if top.is_zero() {
                continue;
            }
            let f = top.exact_div(lc)?;
            for (i, c) in d.rows.iter().enumerate() {
                r[i + shift] = &r[i + shift] - &(&f * c);
            }
            q[shift] = f;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(BiPoly::new(q))
        } else {
            None
        }
    }

    /// gcd of the `x`-coefficients, a primitive polynomial in `y`.
    pub fn content_x(&self) -> IntPoly {
        let mut g = IntPoly::zero();
        for r in &self.rows {
            g = g.gcd(r);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn integer_content(&self) -> BigInt {
        use num_integer::Integer;
        let mut g = BigInt::zero();
        for r in &self.rows {
            g = g.gcd(&r.content());
        }
        g
    }

    /// Integer content 1 and positive leading coefficient (in `x`, then `y`).
    pub fn normalize(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.integer_content();
        if self.rows.last().unwrap().lc().is_negative() {
            c = -c;
        }
        BiPoly::new(self.rows.iter().map(|r| r.div_scalar_exact(&c)).collect())
    }

    fn primitive_x(&self) -> BiPoly {
        let c = self.content_x();
        if c.is_one() || c.is_zero() {
            return self.normalize();
        }
        BiPoly::new(self.rows.iter().map(|r| r.exact_div(&c).expect("content divides")).collect())
            .normalize()
    }

    /// gcd in `Q[x, y]`, normalized.
    pub fn gcd(&self, o: &BiPoly) -> BiPoly {
        if self.is_zero() {
            return o.normalize();
        }
        if o.is_zero() {
            return self.normalize();
        }
        let cg = self.content_x().gcd(&o.content_x());
        let (mut a, mut b) = if self.deg_x() >= o.deg_x() {
            (self.primitive_x(), o.primitive_x())
        } else {
            (o.primitive_x(), self.primitive_x())
        };
        while !b.is_zero() {
            if b.deg_x() == 0 {
                a = BiPoly::constant(BigInt::one());
                break;
            }
            let r = BiPoly::new(prem_generic(&a.rows, &b.rows));
            a = b;
            b = if r.is_zero() { r } else { r.primitive_x() };
        }
        BiPoly::from_y(&cg).mul(&a.primitive_x()).normalize()
    }

    /// Square-free part with respect to `x` and `y` jointly.
    pub fn squarefree_part(&self) -> BiPoly {
        if self.is_zero() {
            return self.clone();
        }
        let cy = self.content_x();
        let prim = BiPoly::new(
            self.rows.iter().map(|r| r.exact_div(&cy).expect("content divides")).collect(),
        );
        let g = prim.gcd(&prim.derivative_x());
        let core = prim.exact_div(&g).expect("gcd divides");
        BiPoly::from_y(&cy.squarefree_part()).mul(&core).normalize()
    }

    pub fn derivative_x(&self) -> BiPoly {
        BiPoly::new(
            self.rows
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, r)| r.scale(&BigInt::from(i)))
                .collect(),
        )
    }

    pub fn derivative_y(&self) -> BiPoly {
        BiPoly::new(self.rows.iter().map(|r| r.derivative()).collect())
    }

    /// Substitute `y = q`, giving a polynomial in `x` with rational coefficients.
    pub fn eval_y_rational(&self, q: &BigRational) -> Vec<BigRational> {
        self.rows.iter().map(|r| r.eval_rational(q)).collect()
    }

    /// Substitute `x = q`, giving a polynomial in `y` with rational coefficients.
    pub fn eval_x_rational(&self, q: &BigRational) -> Vec<BigRational> {
        self.swap().eval_y_rational(q)
    }

    pub fn eval_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for r in self.rows.iter().rev() {
            let mut v = 0.0;
            for c in r.coeffs().iter().rev() {
                v = v * y + big_to_f64(c);
            }
            acc = acc * x + v;
        }
        acc
    }

    /// `(deg_x, deg_y, coefficient)` for every nonzero term.
    pub fn terms(&self) -> Vec<(usize, usize, BigInt)> {
        let mut out = Vec::new();
        for (i, r) in self.rows.iter().enumerate() {
            for (j, c) in r.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }
}

pub(crate) fn big_to_f64(c: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or(if c.is_negative() { f64::MIN } else { f64::MAX })
}

/// Sylvester resultant eliminating the chosen variable.
///
/// Errors when either input is identically zero.
pub fn resultant(a: &BiPoly, b: &BiPoly, eliminate: Eliminate) -> Result<IntPoly> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::Degenerate("resultant of a zero polynomial".into()));
    }
    let (a, b) = match eliminate {
        Eliminate::X => (a.clone(), b.clone()),
        Eliminate::Y => (a.swap(), b.swap()),
    };
    Ok(sylvester_resultant(&a.rows, &b.rows))
}

impl fmt::Debug for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms()
            .iter()
            .map(|(i, j, c)| format!("{}*x^{}*y^{}", c, i, j))
            .collect();
        write!(f, "BiPoly({})", if parts.is_empty() { "0".into() } else { parts.join(" + ") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn resultant_examples() {
        // Res_s(s - t^2, s - t) with s = x, t = y
        let a = BiPoly::from_terms(&[(1, 0, 1), (0, 2, -1)]);
        let b = BiPoly::from_terms(&[(1, 0, 1), (0, 1, -1)]);
        let r = resultant(&a, &b, Eliminate::X).unwrap();
        assert!(r == p(&[0, -1, 1]) || r == p(&[0, 1, -1]));
        // identical inputs
        let c = BiPoly::from_terms(&[(2, 0, 1), (0, 0, 1)]);
        assert!(resultant(&c, &c, Eliminate::X).unwrap().is_zero());
        // Res_s(s - 1, s + 1) = 2
        let d = BiPoly::from_x(&p(&[-1, 1]));
        let e = BiPoly::from_x(&p(&[1, 1]));
        assert_eq!(resultant(&d, &e, Eliminate::X).unwrap(), p(&[2]));
        assert!(resultant(&BiPoly::zero(), &e, Eliminate::X).is_err());
    }

    #[test]
    fn integer_determinant() {
        let m: Vec<Vec<BigInt>> = [[2, 0, 1], [1, 3, 2], [1, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        // 2(3-2) - 0 + 1(1-3) = 0
        assert_eq!(det_bareiss(m), BigInt::zero());
        let m2: Vec<Vec<BigInt>> = [[0, 1], [1, 0]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        assert_eq!(det_bareiss(m2), BigInt::from(-1));
    }

    #[test]
    fn bivariate_gcd() {
        // (x - y)(x + y + 1) and (x - y)(2x - 3)
        let common = BiPoly::from_terms(&[(1, 0, 1), (0, 1, -1)]);
        let a = common.mul(&BiPoly::from_terms(&[(1, 0, 1), (0, 1, 1), (0, 0, 1)]));
        let b = common.mul(&BiPoly::from_terms(&[(1, 0, 2), (0, 0, -3)]));
        assert_eq!(a.gcd(&b), common);
        let c = BiPoly::from_terms(&[(1, 0, 1), (0, 0, 1)]);
        assert!(a.gcd(&c).is_constant());
    }

    #[test]
    fn gcd_with_content_in_y() {
        // y(x - 1) and y^2 (x + 1)
        let a = BiPoly::from_terms(&[(1, 1, 1), (0, 1, -1)]);
        let b = BiPoly::from_terms(&[(1, 2, 1), (0, 2, 1)]);
        assert_eq!(a.gcd(&b), BiPoly::from_terms(&[(0, 1, 1)]));
    }

    #[test]
    fn bivariate_resultant_entries() {
        // Res over a ring of bivariate entries: eliminate t from (t - u, t - v) -> v - u (up to sign)
        let a = vec![BiPoly::from_terms(&[(1, 0, -1)]), BiPoly::constant(1.into())];
        let b = vec![BiPoly::from_terms(&[(0, 1, -1)]), BiPoly::constant(1.into())];
        let r = sylvester_resultant(&a, &b);
        let expect = BiPoly::from_terms(&[(1, 0, 1), (0, 1, -1)]);
        assert!(r == expect || r == expect.neg());
    }
}
