//! Exact univariate polynomial arithmetic over the integers and the kernels
//! built on it: gcd, factorization, bivariate resultants, rational
//! functions, number-field arithmetic, and certified root isolation.

mod bivariate;
mod factor;
pub mod parse;
mod qpoly;
mod ratfunc;
mod roots;

pub use bivariate::{det_bareiss, resultant, sylvester_resultant, BiPoly, Eliminate, ExactRing};
pub use factor::Factorization;
pub(crate) use bivariate::big_to_f64;
pub(crate) use factor::factor_ordering;
pub use qpoly::{NumberField, QPoly};
pub use ratfunc::RatFunc;
pub use roots::{isolate_roots, isolate_squarefree, RootBox};

use crate::dyadic::{CDy, Disk, Dy};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Dense polynomial with integer coefficients, index = degree.
///
/// The coefficient vector never has trailing zeros; the zero polynomial has
/// an empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly::constant(BigInt::one())
    }

    pub fn x() -> Self {
        IntPoly::from_i64(&[0, 1])
    }

    pub fn constant(c: BigInt) -> Self {
        IntPoly::new(vec![c])
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut v = vec![BigInt::zero(); k + 1];
        v[k] = c;
        IntPoly::new(v)
    }

    /// `X - r` scaled to integers for a rational root `r`.
    pub fn linear_with_root(r: &BigRational) -> Self {
        IntPoly::new(vec![-r.numer().clone(), r.denom().clone()]).primitive()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content 1 and positive leading coefficient.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn is_primitive_normalized(&self) -> bool {
        !self.is_zero() && self.content().is_one() && self.lc().is_positive()
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * k).collect())
    }

    pub fn div_scalar_exact(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a / k).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn pow(&self, n: u32) -> IntPoly {
        let mut acc = IntPoly::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner(X))`.
    pub fn compose(&self, inner: &IntPoly) -> IntPoly {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &IntPoly::constant(c.clone());
        }
        acc
    }

    /// `X^deg * self(1/X)`.
    pub fn reverse(&self) -> IntPoly {
        let mut v = self.coeffs.clone();
        v.reverse();
        IntPoly::new(v)
    }

    /// `self(-X)`.
    pub fn negate_var(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// `self(X^k)`.
    pub fn inflate(&self, k: usize) -> IntPoly {
        let mut v = vec![BigInt::zero(); self.deg() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            v[i * k] = c.clone();
        }
        IntPoly::new(v)
    }

    /// Multiplicity of the root 0.
    pub fn low_order(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn shift_down(&self, k: usize) -> IntPoly {
        IntPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        // homogenized Horner: sum c_k p^k q^(d-k) / q^d
        let p = x.numer();
        let q = x.denom();
        let d = self.deg();
        let mut acc = BigInt::zero();
        let mut qpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * p + c * &qpow;
            qpow *= q;
        }
        BigRational::new(acc, num_traits::pow(q.clone(), d))
    }

    /// Exact evaluation at a complex dyadic point.
    pub fn eval_cdy(&self, z: &CDy) -> CDy {
        let mut acc = CDy::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&CDy::real(Dy::from_int(c.clone())));
        }
        acc
    }

    /// Enclosure of the values on a disk, Horner in disk arithmetic.
    pub fn eval_disk(&self, z: &Disk, prec: u64) -> Disk {
        if z.is_exact() && self.deg() <= 64 {
            return Disk::point(self.eval_cdy(&z.center)).round(prec);
        }
        let mut acc = Disk::point(CDy::zero());
        for c in self.coeffs.iter().rev() {
            acc = acc
                .mul(z)
                .add(&Disk::point(CDy::real(Dy::from_int(c.clone()))))
                .round(prec);
        }
        acc
    }

    /// Pseudo-division: `lc(d)^k * self = q*d + r` with `k = deg(self) - deg(d) + 1`.
    pub fn pseudo_div_rem(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(!d.is_zero(), "pseudo-division by zero polynomial");
        let dd = d.deg();
        if self.is_zero() || self.deg() < dd {
            return (IntPoly::zero(), self.clone());
        }
        let lc = d.lc();
        let k = self.deg() - dd + 1;
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for _ in 0..k {
            let rd = match r.iter().rposition(|c| !c.is_zero()) {
                Some(i) => i,
                None => break,
            };
            // multiply remainder and quotient by lc
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for c in q.iter_mut() {
                *c *= &lc;
            }
            if rd < dd {
                continue;
            }
            let shift = rd - dd;
            let f = r[rd].clone() / &lc;
            q[shift] += &f;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[i + shift] -= &f * c;
            }
        }
        (IntPoly::new(q), IntPoly::new(r))
    }

    pub fn pseudo_rem(&self, d: &IntPoly) -> IntPoly {
        self.pseudo_div_rem(d).1
    }

    /// Exact quotient over Z if `d` divides `self`.
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let dd = d.deg();
        let lc = d.lc();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        for shift in (0..=self.deg() - dd).rev() {
            let top = &r[shift + dd];
            if top.is_zero() {
                continue;
            }
            let (f, rem) = top.div_rem(&lc);
            if !rem.is_zero() {
                return None;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                r[i + shift] -= &f * c;
            }
            q[shift] = f;
        }
        if r.iter().all(|c| c.is_zero()) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Divisibility over Q.
    pub fn divides(&self, other: &IntPoly) -> bool {
        other.primitive().exact_div(&self.primitive()).is_some()
    }

    /// Primitive normalized gcd (primitive PRS). Returns 1 for coprime inputs.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.primitive();
        }
        if other.is_zero() {
            return self.primitive();
        }
        let (mut a, mut b) = if self.deg() >= other.deg() {
            (self.primitive(), other.primitive())
        } else {
            (other.primitive(), self.primitive())
        };
        while !b.is_zero() {
            if b.is_constant() {
                return IntPoly::one();
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Product of the distinct irreducible factors, primitive.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.is_constant() {
            return IntPoly::one();
        }
        let g = self.gcd(&self.derivative());
        self.primitive().exact_div(&g).expect("gcd divides").primitive()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    /// The m-th cyclotomic polynomial.
    pub fn cyclotomic(m: u64) -> IntPoly {
        assert!(m >= 1, "cyclotomic index must be positive");
        // Phi_m = prod_{d | m} (X^d - 1)^mu(m/d); divide out proper divisors instead.
        let mut p = IntPoly::monomial(BigInt::one(), m as usize) - IntPoly::one();
        for d in 1..m {
            if m.is_multiple_of(d) {
                p = p.exact_div(&IntPoly::cyclotomic(d)).expect("cyclotomic divides");
            }
        }
        p
    }

    /// Rational-root test.
    pub fn has_rational_root(&self, r: &BigRational) -> bool {
        self.eval_rational(r).is_zero()
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// Sum of absolute values of coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn fmt_var(&self, var: &str) -> String {
        format_poly(&self.coeffs, var)
    }

    /// Coefficients as decimal strings, ascending.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

pub(crate) fn format_poly<T: fmt::Display + Zero + One + PartialEq + Signed + Clone>(
    coeffs: &[T],
    var: &str,
) -> String {
    if coeffs.iter().all(|c| c.is_zero()) {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let a = c.abs();
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = match k {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, k),
        };
        if k == 0 {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", a, mono));
        }
    }
    out
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({})", self.fmt_var("X"))
    }
}

impl std::str::FromStr for IntPoly {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        parse::parse_int_poly(s)
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;

    fn add(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;

    fn sub(self, o: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;

    fn mul(self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut v = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntPoly::new(v)
    }
}

impl Add for IntPoly {
    type Output = IntPoly;

    fn add(self, o: IntPoly) -> IntPoly {
        &self + &o
    }
}

impl Sub for IntPoly {
    type Output = IntPoly;

    fn sub(self, o: IntPoly) -> IntPoly {
        &self - &o
    }
}

impl Mul for IntPoly {
    type Output = IntPoly;

    fn mul(self, o: IntPoly) -> IntPoly {
        &self * &o
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[-1, 1])), p(&[-1, 1]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[-1, 1])), IntPoly::one());
        // 2X^2 - 2 and 4X - 4 -> X - 1 after content removal
        assert_eq!(p(&[-2, 0, 2]).gcd(&p(&[-4, 4])), p(&[-1, 1]));
    }

    #[test]
    fn gcd_divides_both() {
        let a = &p(&[1, 2, 1]) * &p(&[3, 0, 1, 5]);
        let b = &p(&[1, 1]) * &p(&[-7, 2]);
        let g = a.gcd(&b);
        assert_eq!(g, p(&[1, 1]));
        assert!(g.divides(&a) && g.divides(&b));
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(IntPoly::cyclotomic(1), p(&[-1, 1]));
        assert_eq!(IntPoly::cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(IntPoly::cyclotomic(5), p(&[1, 1, 1, 1, 1]));
        assert_eq!(IntPoly::cyclotomic(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn pseudo_division_identity() {
        let a = p(&[3, -1, 4, 1, 5]);
        let d = p(&[2, 7, 3]);
        let (q, r) = a.pseudo_div_rem(&d);
        let k = (a.deg() - d.deg() + 1) as u32;
        let lhs = a.scale(&num_traits::pow(d.lc(), k as usize));
        assert_eq!(lhs, &(&q * &d) + &r);
        assert!(r.deg() < d.deg());
    }

    #[test]
    fn exact_division() {
        let a = &p(&[1, 1]) * &p(&[-2, 0, 3]);
        assert_eq!(a.exact_div(&p(&[1, 1])), Some(p(&[-2, 0, 3])));
        assert_eq!(a.exact_div(&p(&[1, 2])), None);
    }

    #[test]
    fn squarefree() {
        let a = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[2, 1]);
        assert_eq!(a.squarefree_part(), &p(&[-1, 1]) * &p(&[2, 1]));
        assert!(!a.is_squarefree());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -3, 1]).to_string(), "t^2 - 3*t + 1");
        assert_eq!(p(&[0, -1]).to_string(), "-t");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }

    #[test]
    fn eval_rational_matches_integer_eval() {
        let a = p(&[5, -3, 0, 2]);
        let r = BigRational::new(3.into(), 2.into());
        // 5 - 9/2 + 2*27/8 = 5 - 4.5 + 6.75
        assert_eq!(a.eval_rational(&r), BigRational::new(29.into(), 4.into()));
        assert_eq!(a.eval_int(&BigInt::from(2)), BigInt::from(15));
    }
}
