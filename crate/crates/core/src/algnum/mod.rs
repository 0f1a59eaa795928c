//! Algebraic numbers given by a minimal polynomial and an isolating disk,
//! exact arithmetic through resultants, heights, places, and torsion tests.

mod height;

pub use height::{
    height_by_places, is_root_of_unity, is_s_integral, mult_dependence, padic_profile,
    place_report, tuple_height, weil_height, weil_height_bounds, Dependence, PadicAbsProfile,
    PadicPlace, PlaceReport, TupleHeightReport, newton_polygon_profile, rational_to_f64,
};

use crate::dyadic::{CDy, Disk, Dy};
use crate::poly::{isolate_squarefree, resultant, BiPoly, Eliminate, IntPoly, RootBox};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::sync::RwLock;

const MAX_SELECT_PREC: u64 = 1 << 14;

/// A root of an irreducible primitive integer polynomial with positive
/// leading coefficient, singled out by an isolating disk.
///
/// `index` is the position of the root in the canonical order of
/// [`isolate_squarefree`]: real roots ascending, then the others.
pub struct AlgebraicNumber {
    minpoly: IntPoly,
    index: usize,
    root: RwLock<RootBox>,
}

impl Clone for AlgebraicNumber {
    fn clone(&self) -> Self {
        AlgebraicNumber {
            minpoly: self.minpoly.clone(),
            index: self.index,
            root: RwLock::new(self.root_box()),
        }
    }
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        self.minpoly == o.minpoly && self.index == o.index
    }
}

impl Eq for AlgebraicNumber {}

impl std::hash::Hash for AlgebraicNumber {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.minpoly.hash(h);
        self.index.hash(h);
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.approx();
        write!(f, "Alg[{} #{} ~ {:.6}{:+.6}i]", self.minpoly.fmt_var("X"), self.index, re, im)
    }
}

impl AlgebraicNumber {
    fn from_parts(minpoly: IntPoly, index: usize, root: RootBox) -> Self {
        AlgebraicNumber { minpoly, index, root: RwLock::new(root) }
    }

    /// The `index`-th root (canonical order) of an irreducible polynomial.
    pub fn new(minpoly: &IntPoly, index: usize) -> Result<Self> {
        if minpoly.is_constant() {
            return Err(Error::InvalidArgument("minimal polynomial must be nonconstant".into()));
        }
        let m = minpoly.primitive();
        if !m.is_irreducible() {
            return Err(Error::InvalidArgument(format!(
                "{} is not irreducible over Q",
                m.fmt_var("X")
            )));
        }
        let boxes = isolate_squarefree(&m);
        let b = boxes.get(index).cloned().ok_or_else(|| {
            Error::InvalidArgument(format!("root index {} out of range 0..{}", index, boxes.len()))
        })?;
        Ok(AlgebraicNumber::from_parts(m, index, b))
    }

    pub fn rational(q: &BigRational) -> Self {
        let m = IntPoly::linear_with_root(q);
        let b = isolate_squarefree(&m).pop().expect("linear polynomial has a root");
        AlgebraicNumber::from_parts(m, 0, b)
    }

    pub fn from_int(n: i64) -> Self {
        AlgebraicNumber::rational(&BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        AlgebraicNumber::from_int(0)
    }

    pub fn one() -> Self {
        AlgebraicNumber::from_int(1)
    }

    /// All roots of `minpoly` in canonical order.
    pub fn all_roots(minpoly: &IntPoly) -> Result<Vec<AlgebraicNumber>> {
        let m = minpoly.primitive();
        if m.is_constant() || !m.is_irreducible() {
            return Err(Error::InvalidArgument("expected an irreducible polynomial".into()));
        }
        Ok(isolate_squarefree(&m)
            .into_iter()
            .enumerate()
            .map(|(i, b)| AlgebraicNumber::from_parts(m.clone(), i, b))
            .collect())
    }

    /// The root of `poly` (any nonzero polynomial) inside every enclosure
    /// produced by `enclose`, which must contain the target at each precision.
    pub fn from_enclosure<F>(poly: &IntPoly, enclose: F) -> Result<Self>
    where
        F: Fn(u64) -> Option<Disk>,
    {
        if poly.is_constant() {
            return Err(Error::InvalidArgument("constant polynomial has no roots".into()));
        }
        let cands = poly.irreducible_factors();
        select_root(&cands, enclose)
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn root_box(&self) -> RootBox {
        self.root.read().expect("root cache poisoned").clone()
    }

    pub fn is_zero(&self) -> bool {
        self.minpoly.deg() == 1 && self.minpoly.coeff(0).is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.minpoly == IntPoly::from_i64(&[-1, 1])
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        if self.degree() == 1 {
            Some(BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
        } else {
            None
        }
    }

    pub fn is_real(&self) -> bool {
        self.root_box().is_real()
    }

    /// Enclosing disk with relative radius at most `2^-bits`.
    pub fn disk(&self, bits: u64) -> Disk {
        if let Some(q) = self.as_rational() {
            if let Some(d) = exact_dyadic(&q) {
                return Disk::point(CDy::real(d));
            }
            return Disk::from_rational(&q, bits + 8);
        }
        let cur = self.root_box();
        let need = cur.precision_bits() < bits as f64;
        if !need {
            return cur.disk().clone();
        }
        let refined = cur.refine_rel(&self.minpoly, bits);
        let d = refined.disk().clone();
        let mut w = self.root.write().expect("root cache poisoned");
        if refined.precision_bits() > w.precision_bits() {
            *w = refined;
        }
        d
    }

    pub fn approx(&self) -> (f64, f64) {
        self.disk(60).center.to_f64()
    }

    pub fn conjugates(&self) -> Vec<AlgebraicNumber> {
        AlgebraicNumber::all_roots(&self.minpoly).expect("minimal polynomial is irreducible")
    }

    pub fn neg(&self) -> AlgebraicNumber {
        let m = self.minpoly.negate_var().primitive();
        let src = self.clone();
        select_root(&[m], move |bits| Some(src.disk(bits).neg())).expect("negation root selection")
    }

    pub fn recip(&self) -> Result<AlgebraicNumber> {
        if self.is_zero() {
            return Err(Error::ZeroInput("reciprocal of zero"));
        }
        if let Some(q) = self.as_rational() {
            return Ok(AlgebraicNumber::rational(&q.recip()));
        }
        let m = self.minpoly.reverse().primitive();
        let src = self.clone();
        select_root(&[m], move |bits| src.disk(bits + 4).recip(bits + 8))
    }

    /// `self^n`; errors for a zero base with negative exponent.
    pub fn pow(&self, n: i64) -> Result<AlgebraicNumber> {
        if n < 0 {
            return self.recip()?.pow(-n);
        }
        if n == 0 {
            return Ok(AlgebraicNumber::one());
        }
        if n == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        if let Some(q) = self.as_rational() {
            return Ok(AlgebraicNumber::rational(&num_traits::pow(q, n as usize)));
        }
        // Res_y(P(y), X - y^n): roots are the n-th powers of the conjugates
        let p = BiPoly::from_x(&self.minpoly);
        let q = BiPoly::term(BigInt::one(), 0, 1).sub(&BiPoly::term(BigInt::one(), n as usize, 0));
        let r = resultant(&p, &q, Eliminate::X)?;
        let src = self.clone();
        let extra = 64 - (n as u64).leading_zeros() as u64;
        AlgebraicNumber::from_enclosure(&r, move |bits| {
            src.disk(bits + extra + 8).powi(n, bits + extra + 16)
        })
    }

    pub fn mul(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        if self.is_zero() || o.is_zero() {
            return Ok(AlgebraicNumber::zero());
        }
        if let (Some(a), Some(b)) = (self.as_rational(), o.as_rational()) {
            return Ok(AlgebraicNumber::rational(&(a * b)));
        }
        if self.is_one() {
            return Ok(o.clone());
        }
        if o.is_one() {
            return Ok(self.clone());
        }
        // Res_z(P(z), z^e Q(X/z)) with e = deg Q
        let p = BiPoly::from_x(&self.minpoly);
        let e = o.minpoly.deg();
        let mut q = BiPoly::zero();
        for (k, c) in o.minpoly.coeffs().iter().enumerate() {
            if !c.is_zero() {
                q = q.add(&BiPoly::term(c.clone(), e - k, k));
            }
        }
        let r = resultant(&p, &q, Eliminate::X)?;
        let (a, b) = (self.clone(), o.clone());
        AlgebraicNumber::from_enclosure(&r, move |bits| {
            Some(a.disk(bits + 8).mul(&b.disk(bits + 8)).round(bits + 16))
        })
    }

    /// `prod x_i^{e_i}` computed exactly.
    pub fn monomial(xs: &[AlgebraicNumber], exps: &[i64]) -> Result<AlgebraicNumber> {
        let mut acc = AlgebraicNumber::one();
        for (x, &e) in xs.iter().zip(exps) {
            if e != 0 {
                acc = acc.mul(&x.pow(e)?)?;
            }
        }
        Ok(acc)
    }

    pub fn minpoly_string(&self) -> String {
        self.minpoly.fmt_var("X")
    }
}

fn exact_dyadic(q: &BigRational) -> Option<Dy> {
    let d = q.denom();
    if (d & (d - BigInt::one())).is_zero() {
        let k = d.bits() as i64 - 1;
        Some(Dy::new(q.numer().clone(), -k))
    } else {
        None
    }
}

/// Pick the unique root among the candidates' roots that meets the enclosure.
pub(crate) fn select_root<F>(candidates: &[IntPoly], enclose: F) -> Result<AlgebraicNumber>
where
    F: Fn(u64) -> Option<Disk>,
{
    let mut boxes: Vec<Vec<RootBox>> = candidates.iter().map(isolate_squarefree).collect();
    let mut bits = 48u64;
    loop {
        if let Some(e) = enclose(bits) {
            let mut hits = Vec::new();
            for (ci, bs) in boxes.iter().enumerate() {
                for (bi, b) in bs.iter().enumerate() {
                    if b.disk().overlaps(&e) {
                        hits.push((ci, bi));
                    }
                }
            }
            if hits.len() == 1 {
                let (ci, bi) = hits[0];
                let m = candidates[ci].primitive();
                return Ok(AlgebraicNumber::from_parts(m, bi, boxes[ci][bi].clone()));
            }
            if hits.is_empty() {
                return Err(Error::Precision(
                    "enclosure meets no candidate root; inconsistent input".into(),
                ));
            }
            for (ci, bi) in hits {
                let b = &boxes[ci][bi];
                boxes[ci][bi] = b.refine_rel(&candidates[ci], bits);
            }
        }
        bits *= 2;
        if bits > MAX_SELECT_PREC {
            return Err(Error::Precision("could not separate candidate roots".into()));
        }
    }
}

pub(crate) fn parse_value(s: &str) -> Result<AlgebraicNumber> {
    // "a/b" | "<poly>:<index>" | "minpoly:<poly>:<index>"
    let t = s.trim();
    let body = t.strip_prefix("minpoly:").unwrap_or(t);
    if let Some((poly, idx)) = body.rsplit_once(':') {
        let p: IntPoly = poly.parse()?;
        let i: usize = idx.trim().parse().map_err(|_| {
            Error::InvalidArgument(format!("invalid root index '{}'", idx.trim()))
        })?;
        return AlgebraicNumber::new(&p, i);
    }
    Ok(AlgebraicNumber::rational(&crate::poly::parse::parse_rational(body)?))
}

impl std::str::FromStr for AlgebraicNumber {
    type Err = Error;

    /// Accepts `a/b`, `<minpoly>:<index>` or `minpoly:<minpoly>:<index>`.
    fn from_str(s: &str) -> Result<Self> {
        parse_value(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn construct_and_order() {
        let s2 = AlgebraicNumber::new(&p(&[-2, 0, 1]), 1).unwrap();
        assert!((s2.approx().0 - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(AlgebraicNumber::new(&p(&[-1, 0, 1]), 0).is_err());
        assert!(AlgebraicNumber::new(&p(&[-2, 0, 1]), 2).is_err());
    }

    #[test]
    fn powers_and_products() {
        let s2 = AlgebraicNumber::new(&p(&[-2, 0, 1]), 1).unwrap();
        assert_eq!(s2.pow(2).unwrap(), AlgebraicNumber::from_int(2));
        assert_eq!(s2.mul(&s2).unwrap(), AlgebraicNumber::from_int(2));
        let phi = AlgebraicNumber::new(&p(&[-1, -1, 1]), 1).unwrap();
        let inv = phi.pow(-1).unwrap();
        assert_eq!(inv.minpoly(), &p(&[-1, 1, 1]));
        assert!((inv.approx().0 - 0.6180339887498949).abs() < 1e-14);
        let m = s2.neg();
        assert_eq!(m.index(), 0);
        assert!(s2.mul(&m).unwrap() == AlgebraicNumber::from_int(-2));
    }

    #[test]
    fn cube_of_complex_root() {
        // primitive 6th root of unity cubed is -1
        let z = AlgebraicNumber::new(&p(&[1, -1, 1]), 1).unwrap();
        assert_eq!(z.pow(3).unwrap(), AlgebraicNumber::from_int(-1));
        let z2 = z.pow(2).unwrap();
        assert_eq!(z2.minpoly(), &p(&[1, 1, 1]));
    }

    #[test]
    fn parse_values() {
        let a: AlgebraicNumber = "3/6".parse().unwrap();
        assert_eq!(a.as_rational(), Some(BigRational::new(1.into(), 2.into())));
        let b: AlgebraicNumber = "X^2-2:1".parse().unwrap();
        assert!(b.approx().0 > 1.4);
        let c: AlgebraicNumber = "minpoly:X^2-X-1:0".parse().unwrap();
        assert!(c.approx().0 < 0.0);
    }
}
