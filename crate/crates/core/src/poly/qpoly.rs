//! Polynomials over Q and arithmetic in simple number fields `Q[t]/(q)`.

use super::IntPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Dense polynomial with rational coefficients, ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigRational {
        self.coeffs.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        QPoly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        QPoly::new(v)
    }

    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.deg() < d.deg() || self.is_zero() {
            return (QPoly::zero(), self.clone());
        }
        let dd = d.deg();
        let inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigRational::zero(); self.deg() - dd + 1];
        for shift in (0..=self.deg() - dd).rev() {
            let top = &r[shift + dd];
            if top.is_zero() {
                continue;
            }
            let f = top * &inv;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[i + shift] -= &f * c;
            }
            q[shift] = f;
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        self.scale(&self.lc().recip())
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Clear denominators: the primitive integer polynomial with the same roots.
    pub fn to_int_primitive(&self) -> IntPoly {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        IntPoly::new(self.coeffs.iter().map(|c| (c * &l).to_integer()).collect()).primitive()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }
}

/// `Q[t]/(q)` for an irreducible `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct NumberField {
    modulus: QPoly,
}

impl NumberField {
    pub fn new(q: &IntPoly) -> Self {
        assert!(q.deg() >= 1, "number field modulus must be nonconstant");
        NumberField { modulus: q.to_qpoly().monic() }
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn reduce(&self, a: &QPoly) -> QPoly {
        a.rem(&self.modulus)
    }

    pub fn mul(&self, a: &QPoly, b: &QPoly) -> QPoly {
        self.reduce(&a.mul(b))
    }

    /// Inverse via extended Euclid; `None` for zero.
    pub fn inv(&self, a: &QPoly) -> Option<QPoly> {
        let a = self.reduce(a);
        if a.is_zero() {
            return None;
        }
        // invariant: r0 = s0 * a (mod modulus), r1 = s1 * a
        let (mut r0, mut r1) = (self.modulus.clone(), a);
        let (mut s0, mut s1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s = s0.sub(&q.mul(&s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 is a nonzero constant since the modulus is irreducible
        if r0.deg() != 0 {
            return None;
        }
        Some(self.reduce(&s0.scale(&r0.lc().recip())))
    }

    /// Reduce an integer polynomial in `t` into the field.
    pub fn embed(&self, p: &IntPoly) -> QPoly {
        self.reduce(&p.to_qpoly())
    }

    /// Monic gcd of polynomials with coefficients in the field (ascending lists).
    pub fn poly_gcd(&self, a: &[QPoly], b: &[QPoly]) -> Vec<QPoly> {
        let mut a = self.trim(a.to_vec());
        let mut b = self.trim(b.to_vec());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b);
            a = b;
            b = r;
        }
        self.poly_monic(&a)
    }

    fn trim(&self, mut v: Vec<QPoly>) -> Vec<QPoly> {
        for c in v.iter_mut() {
            *c = self.reduce(c);
        }
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    fn poly_monic(&self, a: &[QPoly]) -> Vec<QPoly> {
        match a.last() {
            None => Vec::new(),
            Some(lc) => {
                let inv = self.inv(lc).expect("nonzero leading coefficient");
                a.iter().map(|c| self.mul(c, &inv)).collect()
            }
        }
    }

    fn poly_rem(&self, a: &[QPoly], d: &[QPoly]) -> Vec<QPoly> {
        let dd = d.len() - 1;
        let inv = self.inv(&d[dd]).expect("nonzero leading coefficient");
        let mut r = a.to_vec();
        while r.len() > dd {
            let top = self.mul(r.last().unwrap(), &inv);
            let shift = r.len() - 1 - dd;
            for (i, c) in d.iter().enumerate() {
                r[i + shift] = self.reduce(&r[i + shift].sub(&top.mul(c)));
            }
            debug_assert!(r.last().unwrap().is_zero());
            r.pop();
            r = self.trim(r);
        }
        r
    }
}
