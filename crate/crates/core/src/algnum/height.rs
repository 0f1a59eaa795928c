//! Weil heights by the Mahler-measure formula and by summing over places,
//! p-adic profiles from Newton polygons, S-integrality, torsion detection,
//! and bounded multiplicative-dependence search.

use super::AlgebraicNumber;
use crate::arith::{factor_integer, is_prime_u64, ln_abs_int, supported_on, totient, valuation};
use crate::dyadic::Dy;
use crate::poly::IntPoly;
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

const HEIGHT_BITS: u64 = 64;

/// Interval for `ln max(1, |z|)` over a conjugate.
fn log_plus_bounds(x: &AlgebraicNumber) -> (f64, f64) {
    let d = x.disk(HEIGHT_BITS);
    let lo = d.abs_lower();
    let hi = d.abs_upper();
    let l = if lo > Dy::one() { lo.ln_abs() - 1e-15 } else { 0.0 };
    let h = if hi > Dy::one() { hi.ln_abs() + 1e-15 } else { 0.0 };
    (l.max(0.0), h.max(0.0))
}

fn archimedean_sum(x: &AlgebraicNumber) -> (f64, f64) {
    let mut lo = 0.0;
    let mut hi = 0.0;
    for c in x.conjugates() {
        let (a, b) = log_plus_bounds(&c);
        lo += a;
        hi += b;
    }
    (lo, hi)
}

/// Certified enclosure `[lo, hi]` of the absolute logarithmic Weil height.
pub fn weil_height_bounds(x: &AlgebraicNumber) -> Result<(f64, f64)> {
    if x.is_zero() {
        return Err(Error::ZeroInput("height of zero"));
    }
    if let Some(q) = x.as_rational() {
        let m = q.numer().abs().max(q.denom().clone());
        let v = ln_abs_int(&m);
        return Ok(((v - 1e-15 * v).max(0.0), v + 1e-15 * v));
    }
    let d = x.degree() as f64;
    let lead = ln_abs_int(&x.minpoly().lc());
    let (lo, hi) = archimedean_sum(x);
    let slack = 1e-15 * (lead + hi + 1.0);
    Ok((((lead + lo) / d - slack).max(0.0), (lead + hi) / d + slack))
}

/// `h(x) = (1/d) (ln a_d + sum ln max(1, |z|))`.
pub fn weil_height(x: &AlgebraicNumber) -> Result<f64> {
    let (lo, hi) = weil_height_bounds(x)?;
    Ok(0.5 * (lo + hi))
}

/// One p-adic place class: `|x|_v = p^exponent`, local degree `weight`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PadicPlace {
    #[serde(serialize_with = "ser_rational")]
    pub exponent: BigRational,
    pub weight: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PadicAbsProfile {
    #[serde(serialize_with = "ser_display")]
    pub prime: BigInt,
    pub entries: Vec<PadicPlace>,
}

fn ser_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::poly::parse::fmt_rational(q))
}

fn ser_display<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl PadicAbsProfile {
    /// `sum_v weight * ln max(1, |x|_v)`.
    pub fn log_plus_sum(&self) -> f64 {
        let lp = ln_abs_int(&self.prime);
        self.entries
            .iter()
            .filter(|e| e.exponent.is_positive())
            .map(|e| e.weight as f64 * rational_to_f64(&e.exponent) * lp)
            .sum()
    }

    pub fn total_weight(&self) -> usize {
        self.entries.iter().map(|e| e.weight).sum()
    }

    pub fn max_exponent(&self) -> BigRational {
        self.entries.iter().map(|e| e.exponent.clone()).max().unwrap_or_else(BigRational::zero)
    }
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

/// Profile of `|.|_v` over the places above `p` from the lower Newton polygon
/// of `(k, v_p(a_k))`.
pub fn newton_polygon_profile(poly: &IntPoly, p: &BigInt) -> Vec<PadicPlace> {
    let pts: Vec<(i64, i64)> = poly
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k as i64, valuation(c, p) as i64))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (k1, v1) = hull[hull.len() - 2];
            let (k2, v2) = hull[hull.len() - 1];
            // keep strictly convex lower hull
            let cross = (k2 - k1) * (pt.1 - v1) - (v2 - v1) * (pt.0 - k1);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull.windows(2)
        .map(|w| {
            let (k1, v1) = w[0];
            let (k2, v2) = w[1];
            PadicPlace {
                exponent: BigRational::new(BigInt::from(v2 - v1), BigInt::from(k2 - k1)),
                weight: (k2 - k1) as usize,
            }
        })
        .collect()
}

pub fn padic_profile(x: &AlgebraicNumber, p: &BigInt) -> Result<PadicAbsProfile> {
    if x.is_zero() {
        return Err(Error::ZeroInput("p-adic profile of zero"));
    }
    if p < &BigInt::from(2) || p.to_u64().is_some_and(|q| !is_prime_u64(q)) {
        return Err(Error::InvalidArgument(format!("{} is not a prime", p)));
    }
    Ok(PadicAbsProfile { prime: p.clone(), entries: newton_polygon_profile(x.minpoly(), p) })
}

/// Primes at which `x` can have nontrivial absolute value: those dividing the
/// leading or constant coefficient.
fn relevant_primes(x: &AlgebraicNumber) -> Result<Vec<BigInt>> {
    let mut ps: Vec<BigInt> =
        factor_integer(&x.minpoly().lc())?.into_iter().map(|(p, _)| p).collect();
    // primes of the constant term only carry |x|_v < 1 and never contribute;
    // they are listed when the factorization is cheap
    if let Ok(f) = factor_integer(&x.minpoly().coeff(0)) {
        ps.extend(f.into_iter().map(|(p, _)| p));
    }
    ps.sort();
    ps.dedup();
    Ok(ps)
}

/// Archimedean and finite contributions to the height.
#[derive(Clone, Debug, Serialize)]
pub struct PlaceReport {
    /// `(re, im, ln max(1,|z|))` per conjugate.
    pub archimedean: Vec<(f64, f64, f64)>,
    pub finite: Vec<PadicAbsProfile>,
    pub degree: usize,
    pub height: f64,
}

pub fn place_report(x: &AlgebraicNumber) -> Result<PlaceReport> {
    if x.is_zero() {
        return Err(Error::ZeroInput("height of zero"));
    }
    let mut archimedean = Vec::new();
    let mut total = 0.0;
    for c in x.conjugates() {
        let (lo, hi) = log_plus_bounds(&c);
        let (re, im) = c.approx();
        let v = 0.5 * (lo + hi);
        total += v;
        archimedean.push((re, im, v));
    }
    let mut finite = Vec::new();
    for p in relevant_primes(x)? {
        let prof = padic_profile(x, &p)?;
        total += prof.log_plus_sum();
        finite.push(prof);
    }
    let degree = x.degree();
    Ok(PlaceReport { archimedean, finite, degree, height: total / degree as f64 })
}

/// `(1/[K:Q]) sum_v d_v ln max(1, |x|_v)` over all places.
pub fn height_by_places(x: &AlgebraicNumber) -> Result<f64> {
    Ok(place_report(x)?.height)
}

/// All coordinates have `|x_i|_v <= 1` at every finite place outside `primes`.
pub fn is_s_integral(xs: &[AlgebraicNumber], primes: &[u64]) -> Result<bool> {
    for x in xs {
        if x.is_zero() {
            return Err(Error::ZeroInput("S-integrality of a zero coordinate"));
        }
        if !supported_on(&x.minpoly().lc(), primes) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Order `m` when `x` is a root of unity (minimal polynomial is the m-th cyclotomic).
pub fn is_root_of_unity(x: &AlgebraicNumber) -> Option<u64> {
    let m = x.minpoly();
    let d = m.deg() as u64;
    if !m.lc().is_one_abs() || !m.coeff(0).is_one_abs() {
        return None;
    }
    // phi(n) >= sqrt(n / 2), so phi(n) = d forces n <= 2 d^2
    for n in 1..=(2 * d * d + 2) {
        if totient(n) == d && IntPoly::cyclotomic(n) == *m {
            return Some(n);
        }
    }
    None
}

trait OneAbs {
    fn is_one_abs(&self) -> bool;
}

impl OneAbs for BigInt {
    fn is_one_abs(&self) -> bool {
        self.abs() == BigInt::from(1)
    }
}

/// Heights of the coordinates of a tuple and the tuple height `max`.
#[derive(Clone, Debug, Serialize)]
pub struct TupleHeightReport {
    pub heights: Vec<f64>,
    pub tuple_height: f64,
    pub exp_height: f64,
}

pub fn tuple_height(xs: &[AlgebraicNumber]) -> Result<TupleHeightReport> {
    let heights = xs.iter().map(weil_height).collect::<Result<Vec<f64>>>()?;
    let tuple_height = heights.iter().cloned().fold(0.0, f64::max);
    Ok(TupleHeightReport { heights, tuple_height, exp_height: tuple_height.exp() })
}

/// `z^k * a^l` is a root of unity of the given order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dependence {
    pub k: i64,
    pub l: i64,
    pub order: u64,
}

fn reduced_pairs(bound: i64) -> Vec<(i64, i64)> {
    let mut out = vec![(0, 1)];
    for k in 1..=bound {
        for al in 0..=bound {
            if al.gcd(&k) != 1 {
                continue;
            }
            if al == 0 {
                out.push((k, 0));
            } else {
                out.push((k, -al));
                out.push((k, al));
            }
        }
    }
    out
}

/// Smallest reduced `(k, l)` with `max(|k|, |l|) <= bound` making
/// `z^k a^l` torsion, verified exactly.
pub fn mult_dependence(
    z: &AlgebraicNumber,
    a: &AlgebraicNumber,
    bound: i64,
) -> Result<Option<Dependence>> {
    if bound <= 0 {
        return Err(Error::InvalidArgument("dependence search bound must be positive".into()));
    }
    let (zl, zh) = weil_height_bounds(z)?;
    let (al, ah) = weil_height_bounds(a)?;
    for (k, l) in reduced_pairs(bound) {
        // k h(z) = |l| h(a) must hold for a torsion product
        let lhs_lo = k as f64 * zl;
        let lhs_hi = k as f64 * zh;
        let rhs_lo = l.abs() as f64 * al;
        let rhs_hi = l.abs() as f64 * ah;
        let slack = 1e-9 * (1.0 + k as f64 + l.abs() as f64);
        if lhs_lo > rhs_hi + slack || rhs_lo > lhs_hi + slack {
            continue;
        }
        let w = AlgebraicNumber::monomial(&[z.clone(), a.clone()], &[k, l])?;
        if let Some(order) = is_root_of_unity(&w) {
            return Ok(Some(Dependence { k, l, order }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn alg(c: &[i64], i: usize) -> AlgebraicNumber {
        AlgebraicNumber::new(&p(c), i).unwrap()
    }

    #[test]
    fn weil_height_examples() {
        let ln2 = std::f64::consts::LN_2;
        assert!((weil_height(&AlgebraicNumber::from_int(2)).unwrap() - ln2).abs() < 1e-12);
        assert!(weil_height(&alg(&[1, 1, 1, 1, 1], 0)).unwrap().abs() < 1e-12);
        let phi = alg(&[-1, -1, 1], 1);
        assert!((weil_height(&phi).unwrap() - 0.240605912529802).abs() < 1e-12);
        assert!((weil_height(&alg(&[-1, 2], 0)).unwrap() - ln2).abs() < 1e-12);
        assert!(weil_height(&AlgebraicNumber::zero()).is_err());
    }

    #[test]
    fn places_examples() {
        let ln2 = std::f64::consts::LN_2;
        let half = alg(&[-1, 2], 0);
        let r = place_report(&half).unwrap();
        assert!((r.height - ln2).abs() < 1e-12);
        assert_eq!(r.archimedean[0].2, 0.0);
        assert!((height_by_places(&AlgebraicNumber::from_int(3)).unwrap() - 3f64.ln()).abs() < 1e-12);
        let s2 = alg(&[-2, 0, 1], 1);
        assert!((height_by_places(&s2).unwrap() - 0.5 * ln2).abs() < 1e-12);
    }

    #[test]
    fn padic_examples() {
        let two = BigInt::from(2);
        let half = padic_profile(&alg(&[-1, 2], 0), &two).unwrap();
        assert_eq!(half.entries, vec![PadicPlace { exponent: BigRational::from_integer(1.into()), weight: 1 }]);
        let at3 = padic_profile(&AlgebraicNumber::from_int(2), &BigInt::from(3)).unwrap();
        assert_eq!(at3.entries[0].exponent, BigRational::zero());
        let s2 = padic_profile(&alg(&[-2, 0, 1], 1), &two).unwrap();
        assert_eq!(
            s2.entries,
            vec![PadicPlace { exponent: BigRational::new((-1).into(), 2.into()), weight: 2 }]
        );
        assert!(padic_profile(&AlgebraicNumber::from_int(2), &BigInt::from(4)).is_err());
    }

    #[test]
    fn s_integral_examples() {
        let two = AlgebraicNumber::from_int(2);
        let three = AlgebraicNumber::from_int(3);
        let half = alg(&[-1, 2], 0);
        assert!(is_s_integral(&[two, three.clone()], &[]).unwrap());
        assert!(!is_s_integral(&[half.clone(), three.clone()], &[]).unwrap());
        assert!(is_s_integral(&[half, three], &[2]).unwrap());
        assert!(is_s_integral(&[alg(&[-1, -1, 1], 1), AlgebraicNumber::from_int(7)], &[]).unwrap());
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(is_root_of_unity(&alg(&[1, -1, 1], 0)), Some(6));
        assert_eq!(is_root_of_unity(&AlgebraicNumber::one()), Some(1));
        assert_eq!(is_root_of_unity(&AlgebraicNumber::from_int(-1)), Some(2));
        assert_eq!(is_root_of_unity(&alg(&[-1, -1, 1], 0)), None);
        // monic with unit constant term but not cyclotomic
        assert_eq!(is_root_of_unity(&alg(&[1, -3, 1], 0)), None);
    }

    #[test]
    fn dependence_examples() {
        let two = AlgebraicNumber::from_int(2);
        let eight = AlgebraicNumber::from_int(8);
        assert_eq!(
            mult_dependence(&two, &eight, 5).unwrap(),
            Some(Dependence { k: 3, l: -1, order: 1 })
        );
        assert_eq!(mult_dependence(&two, &AlgebraicNumber::from_int(3), 10).unwrap(), None);
        let s2 = alg(&[-2, 0, 1], 1);
        assert_eq!(
            mult_dependence(&s2, &AlgebraicNumber::from_int(-2), 4).unwrap(),
            Some(Dependence { k: 2, l: -1, order: 2 })
        );
        assert!(mult_dependence(&two, &eight, 0).is_err());
    }

    #[test]
    fn tuple_height_is_max() {
        let r = tuple_height(&[AlgebraicNumber::from_int(2), AlgebraicNumber::from_int(5)]).unwrap();
        assert!((r.tuple_height - 5f64.ln()).abs() < 1e-12);
        assert!((r.exp_height - 5.0).abs() < 1e-9);
    }
}
