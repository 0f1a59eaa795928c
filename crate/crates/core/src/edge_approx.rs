//! Newton-polygon data of bivariate Laurent polynomials, edge polynomials and
//! their root set, and approximation certificates for points of large
//! log-vector in the complex and p-adic absolute values.

use crate::algnum::{newton_polygon_profile, rational_to_f64, AlgebraicNumber};
use crate::arith::{is_prime_u64, ln_abs_int};
use crate::dyadic::{CDy, Disk};
use crate::poly::parse::{fmt_rational, parse_laurent};
use crate::poly::{factor_ordering, resultant, BiPoly, Eliminate, IntPoly, QPoly};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

const BIT_SCHEDULE: [u64; 8] = [64, 128, 256, 512, 1024, 2048, 4096, 8192];
const VANISH_BITS: u64 = 1024;
// relative slack absorbing f64 rounding in certified comparisons
const SLACK: f64 = 1e-12;

/// Which absolute value the log-vector is taken in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Archimedean,
    /// The p-adic absolute value for the given prime.
    NonArchimedean(BigInt),
}

/// Laurent polynomial in `X, Y` with nonzero rational coefficients.
pub struct LaurentPoly2 {
    terms: Vec<([i64; 2], BigRational)>,
    edges: OnceLock<Vec<EdgeData>>,
}

impl Clone for LaurentPoly2 {
    fn clone(&self) -> Self {
        LaurentPoly2 { terms: self.terms.clone(), edges: self.edges.clone() }
    }
}

impl PartialEq for LaurentPoly2 {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}

impl fmt::Debug for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly2({})", self)
    }
}

impl fmt::Display for LaurentPoly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mono = monomial_string(*e);
            if mono.is_empty() {
                write!(f, "{}", fmt_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&a), mono)?;
            }
        }
        Ok(())
    }
}

fn monomial_string(e: [i64; 2]) -> String {
    let mut parts = Vec::new();
    for (v, k) in ["X", "Y"].iter().zip(e) {
        match k {
            0 => {}
            1 => parts.push(v.to_string()),
            k if k < 0 => parts.push(format!("{}^({})", v, k)),
            k => parts.push(format!("{}^{}", v, k)),
        }
    }
    parts.join("*")
}

impl LaurentPoly2 {
    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are
    /// summed and zero coefficients dropped. At least two terms must remain.
    pub fn new(terms: Vec<([i64; 2], BigRational)>) -> Result<Self> {
        let mut map: BTreeMap<[i64; 2], BigRational> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(BigRational::zero) += c;
        }
        let terms: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        if terms.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "Laurent polynomial needs at least 2 nonzero terms, got {}",
                terms.len()
            )));
        }
        Ok(LaurentPoly2 { terms, edges: OnceLock::new() })
    }

    pub fn from_i64(terms: &[(i64, i64, i64)]) -> Result<Self> {
        LaurentPoly2::new(
            terms
                .iter()
                .map(|&(a, b, c)| ([a, b], BigRational::from_integer(c.into())))
                .collect(),
        )
    }

    /// Terms sorted by exponent.
    pub fn terms(&self) -> &[([i64; 2], BigRational)] {
        &self.terms
    }

    pub fn support(&self) -> Vec<[i64; 2]> {
        self.terms.iter().map(|(e, _)| *e).collect()
    }

    /// Integer polynomial `c * X^a * Y^b * P` with nonnegative exponents and
    /// content 1, together with the shift `(a, b)`.
    pub fn to_bipoly(&self) -> (BiPoly, [i64; 2]) {
        let a = -self.terms.iter().map(|(e, _)| e[0]).min().unwrap();
        let b = -self.terms.iter().map(|(e, _)| e[1]).min().unwrap();
        let mut l = BigInt::one();
        for (_, c) in &self.terms {
            l = l.lcm(c.denom());
        }
        let mut out = BiPoly::zero();
        for (e, c) in &self.terms {
            let v = (c * &l).to_integer();
            out = out.add(&BiPoly::term(v, (e[0] + a) as usize, (e[1] + b) as usize));
        }
        (out.normalize(), [a, b])
    }

    pub fn eval_rational(&self, x1: &BigRational, x2: &BigRational) -> Result<BigRational> {
        if x1.is_zero() || x2.is_zero() {
            return Err(Error::ZeroInput("Laurent polynomial evaluated at a zero coordinate"));
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += c * rpow(x1, e[0]) * rpow(x2, e[1]);
        }
        Ok(acc)
    }

    fn eval_disk(&self, x1: &Disk, x2: &Disk, prec: u64) -> Option<Disk> {
        let mut acc = Disk::point(CDy::zero());
        for (e, c) in &self.terms {
            let t = x1.powi(e[0], prec)?.mul(&x2.powi(e[1], prec)?).round(prec);
            let cd = Disk::from_rational(c, prec);
            acc = acc.add(&t.mul(&cd).round(prec));
        }
        Some(acc)
    }

    /// Edge decomposition; computed once per polynomial.
    pub fn edges(&self) -> &[EdgeData] {
        self.edges.get_or_init(|| compute_edges(&self.terms))
    }
}

impl std::str::FromStr for LaurentPoly2 {
    type Err = Error;

    /// Accepts `X`, `Y` or `x`, `y` as variables; negative exponents allowed.
    fn from_str(s: &str) -> Result<Self> {
        let sp = match parse_laurent(s, &["X", "Y"]) {
            Ok(sp) => sp,
            Err(e) => parse_laurent(s, &["x", "y"]).map_err(|_| e)?,
        };
        LaurentPoly2::new(sp.terms.into_iter().map(|(e, c)| ([e[0], e[1]], c)).collect())
    }
}

fn rpow(x: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        num_traits::pow(x.clone(), k as usize)
    } else {
        num_traits::pow(x.recip(), k.unsigned_abs() as usize)
    }
}

/// Support diameter and the hypothesis threshold on the log-vector.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonData {
    /// Squared support diameter (exact).
    pub diameter_sq: i64,
    pub diameter: f64,
    pub sigma: usize,
    pub coeff_gap: f64,
    pub threshold: f64,
}

/// Diameter, term-count parameter, coefficient spread and threshold
/// `16 D^2 (ln sigma + coeff_gap)`.
pub fn newton_data(p: &LaurentPoly2, mode: &Mode) -> Result<NewtonData> {
    let sup = p.support();
    let mut d2 = 0i64;
    for a in &sup {
        for b in &sup {
            d2 = d2.max(dist_sq(*a, *b));
        }
    }
    let (sigma, coeff_gap) = match mode {
        Mode::Archimedean => {
            let logs: Vec<f64> = p.terms.iter().map(|(_, c)| ln_abs_rational(c)).collect();
            let gap = max_minus_min(&logs);
            (p.terms.len() - 1, gap)
        }
        Mode::NonArchimedean(prime) => {
            check_prime(prime)?;
            let vals: Vec<f64> = p.terms.iter().map(|(_, c)| rational_valuation(c, prime) as f64).collect();
            (1, max_minus_min(&vals) * ln_abs_int(prime))
        }
    };
    let threshold = 16.0 * d2 as f64 * ((sigma as f64).ln() + coeff_gap);
    Ok(NewtonData { diameter_sq: d2, diameter: (d2 as f64).sqrt(), sigma, coeff_gap, threshold })
}

fn max_minus_min(v: &[f64]) -> f64 {
    let hi = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = v.iter().cloned().fold(f64::INFINITY, f64::min);
    hi - lo
}

fn dist_sq(a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - b[0]).pow(2) + (a[1] - b[1]).pow(2)
}

fn ln_abs_rational(q: &BigRational) -> f64 {
    ln_abs_int(q.numer()) - ln_abs_int(q.denom())
}

fn check_prime(p: &BigInt) -> Result<()> {
    match p.to_u64() {
        Some(v) if is_prime_u64(v) => Ok(()),
        _ => Err(Error::InvalidArgument(format!("{} is not a prime below 2^64", p))),
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    crate::arith::valuation(n, p) as i64
}

fn rational_valuation(q: &BigRational, p: &BigInt) -> i64 {
    int_valuation(q.numer(), p) - int_valuation(q.denom(), p)
}

/// Terms of `P` on one line of the support, collected into a polynomial in
/// `T = X^{j1} Y^{j2}`.
#[derive(Clone, Debug)]
pub struct EdgeData {
    /// Reduced direction: coprime entries, first entry positive or `(0, 1)`.
    pub direction: [i64; 2],
    /// `j1*b2 - j2*b1` for any support point `b` on the line.
    pub offset: i64,
    /// Support point with the smallest parameter on the line.
    pub base: [i64; 2],
    /// Primitive integer polynomial proportional to `T^a G(T)`; its constant
    /// term belongs to `base`.
    pub edge_poly: IntPoly,
    /// Roots with multiplicity, ordered by minimal polynomial then root index.
    pub roots: Vec<(AlgebraicNumber, usize)>,
}

/// Reduced representative of the direction of `v != 0`.
pub fn reduce_direction(v: [i64; 2]) -> [i64; 2] {
    let g = v[0].gcd(&v[1]);
    let (a, b) = (v[0] / g, v[1] / g);
    if a > 0 || (a == 0 && b > 0) {
        [a, b]
    } else {
        [-a, -b]
    }
}

fn compute_edges(terms: &[([i64; 2], BigRational)]) -> Vec<EdgeData> {
    // key: (|j|^2, j, offset) so iteration follows the tie-break order
    let mut lines: BTreeMap<(i64, [i64; 2], i64), BTreeMap<i64, BigRational>> = BTreeMap::new();
    for (a, ca) in terms {
        for (b, _) in terms {
            if a == b {
                continue;
            }
            let j = reduce_direction([b[0] - a[0], b[1] - a[1]]);
            let offset = j[0] * a[1] - j[1] * a[0];
            // <a, j> moves by |j|^2 per step along the line
            let along = j[0] * a[0] + j[1] * a[1];
            let nj = j[0] * j[0] + j[1] * j[1];
            lines.entry((nj, j, offset)).or_default().insert(along, ca.clone());
        }
    }
    let mut out = Vec::new();
    for ((nj, j, offset), pts) in lines {
        let lmin = *pts.keys().next().unwrap();
        let mut coeffs: Vec<BigRational> = Vec::new();
        for (l, c) in &pts {
            let k = ((l - lmin) / nj) as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, BigRational::zero());
            }
            coeffs[k] = c.clone();
        }
        let g = QPoly::new(coeffs).to_int_primitive();
        let base = terms
            .iter()
            .map(|(e, _)| *e)
            .find(|e| j[0] * e[1] - j[1] * e[0] == offset && j[0] * e[0] + j[1] * e[1] == lmin)
            .expect("base point on its line");
        let mut roots = Vec::new();
        for (f, m) in g.factor().factors {
            if f.is_constant() {
                continue;
            }
            for r in AlgebraicNumber::all_roots(&f).expect("irreducible factor") {
                roots.push((r, m));
            }
        }
        roots.sort_by(|a, b| cmp_alg(&a.0, &b.0));
        out.push(EdgeData { direction: j, offset, base, edge_poly: g, roots });
    }
    out
}

fn cmp_alg(a: &AlgebraicNumber, b: &AlgebraicNumber) -> std::cmp::Ordering {
    factor_ordering(a.minpoly(), b.minpoly()).then(a.index().cmp(&b.index()))
}

/// All edges of `P`; the union of their roots is the set `sigma_set`.
pub fn build_sigma(p: &LaurentPoly2) -> Vec<EdgeData> {
    p.edges().to_vec()
}

/// Distinct edge-polynomial roots in canonical order.
pub fn sigma_set(p: &LaurentPoly2) -> Vec<AlgebraicNumber> {
    let mut all: Vec<AlgebraicNumber> =
        p.edges().iter().flat_map(|e| e.roots.iter().map(|(r, _)| r.clone())).collect();
    all.sort_by(cmp_alg);
    all.dedup();
    all
}

/// Reduced directions with squared norm at most `d2`, ordered by norm then
/// lexicographically.
pub fn reduced_directions(d2: i64) -> Vec<[i64; 2]> {
    let mut out = Vec::new();
    let r = (d2 as f64).sqrt() as i64 + 1;
    for a in 0..=r {
        for b in -r..=r {
            if a * a + b * b == 0 || a * a + b * b > d2 {
                continue;
            }
            if reduce_direction([a, b]) == [a, b] && a.gcd(&b) == 1 {
                out.push([a, b]);
            }
        }
    }
    out.sort_by_key(|j| (j[0] * j[0] + j[1] * j[1], *j));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateCase {
    ExactEquality,
    Inequality,
}

/// `x1^{j1} x2^{j2} = alpha`, or `ln|x1^{j1} x2^{j2} - alpha| <= bound`
/// with `bound = -|L| / (16 D^2)`.
#[derive(Clone, Debug)]
pub struct Certificate {
    pub j: [i64; 2],
    pub alpha: AlgebraicNumber,
    pub case: CertificateCase,
    /// Certified upper bound for `ln|x1^{j1} x2^{j2} - alpha|`; `None` in the exact case.
    pub lhs: Option<f64>,
    pub bound: f64,
    pub log_vector: [f64; 2],
    pub norm: f64,
    pub diameter_sq: i64,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        let (re, im) = self.alpha.approx();
        json!({
            "j": self.j,
            "alpha": {
                "minpoly": self.alpha.minpoly_string(),
                "index": self.alpha.index(),
                "approx": [re, im],
            },
            "case": self.case,
            "lhs": self.lhs,
            "bound": self.bound,
            "L": self.log_vector,
            "norm": self.norm,
        })
    }

    /// Re-evaluates the certificate from scratch at a fixed high precision.
    pub fn verify(&self, x1: &AlgebraicNumber, x2: &AlgebraicNumber) -> Result<bool> {
        if self.j[0] * self.j[0] + self.j[1] * self.j[1] > self.diameter_sq {
            return Ok(false);
        }
        match self.case {
            CertificateCase::ExactEquality => {
                Ok(AlgebraicNumber::monomial(&[x1.clone(), x2.clone()], &self.j)? == self.alpha)
            }
            CertificateCase::Inequality => {
                let bits = 2 * BIT_SCHEDULE[BIT_SCHEDULE.len() - 1];
                let (_, nhi) = norm_bounds(x1, x2, bits).ok_or(Error::ZeroInput("point coordinate"))?;
                let w = monomial_disk(x1, x2, self.j, bits)
                    .map(|z| z.sub(&self.alpha.disk(bits)));
                match w.and_then(|w| w.ln_abs_bounds()) {
                    Some((_, hi)) => Ok(hi <= -nhi / (16.0 * self.diameter_sq as f64) + slack(nhi)),
                    None => Ok(false),
                }
            }
        }
    }
}

fn slack(v: f64) -> f64 {
    SLACK * (1.0 + v.abs())
}

fn monomial_disk(x1: &AlgebraicNumber, x2: &AlgebraicNumber, j: [i64; 2], bits: u64) -> Option<Disk> {
    let prec = bits + 32;
    let a = x1.disk(bits + 16).powi(j[0], prec)?;
    let b = x2.disk(bits + 16).powi(j[1], prec)?;
    Some(a.mul(&b).round(prec))
}

fn abs_interval(lo: f64, hi: f64) -> (f64, f64) {
    if lo <= 0.0 && hi >= 0.0 {
        (0.0, lo.abs().max(hi.abs()))
    } else {
        (lo.abs().min(hi.abs()), lo.abs().max(hi.abs()))
    }
}

/// Bounds on `|L|` for `L = (ln|x1|, ln|x2|)` and the midpoint vector.
fn log_vector(x1: &AlgebraicNumber, x2: &AlgebraicNumber, bits: u64) -> Option<([f64; 2], f64, f64)> {
    let (l1, h1) = x1.disk(bits).ln_abs_bounds()?;
    let (l2, h2) = x2.disk(bits).ln_abs_bounds()?;
    let (a1, b1) = abs_interval(l1, h1);
    let (a2, b2) = abs_interval(l2, h2);
    let lo = (a1 * a1 + a2 * a2).sqrt();
    let hi = (b1 * b1 + b2 * b2).sqrt();
    Some(([(l1 + h1) / 2.0, (l2 + h2) / 2.0], lo - slack(lo), hi + slack(hi)))
}

fn norm_bounds(x1: &AlgebraicNumber, x2: &AlgebraicNumber, bits: u64) -> Option<(f64, f64)> {
    log_vector(x1, x2, bits).map(|(_, lo, hi)| (lo, hi))
}

/// Whether `P(x1, x2) = 0`: exactly when a coordinate is rational, otherwise
/// by a resultant divisibility test plus a certified enclosure of the value.
pub fn vanishes_at(p: &LaurentPoly2, x1: &AlgebraicNumber, x2: &AlgebraicNumber) -> Result<bool> {
    if x1.is_zero() || x2.is_zero() {
        return Err(Error::ZeroInput("point coordinates must be nonzero"));
    }
    let (b, _) = p.to_bipoly();
    match (x1.as_rational(), x2.as_rational()) {
        (Some(a), Some(c)) => Ok(p.eval_rational(&a, &c)?.is_zero()),
        (Some(a), None) => Ok(root_of_substituted(&b.eval_x_rational(&a), x2)),
        (None, Some(c)) => Ok(root_of_substituted(&b.eval_y_rational(&c), x1)),
        (None, None) => {
            let r = resultant(&BiPoly::from_x(x1.minpoly()), &b, Eliminate::X)?;
            if !r.is_zero() && !x2.minpoly().divides(&r) {
                return Ok(false);
            }
            for &bits in BIT_SCHEDULE.iter().take_while(|&&b| b <= VANISH_BITS) {
                let v = p.eval_disk(&x1.disk(bits), &x2.disk(bits), bits + 32);
                if let Some(v) = v {
                    if !v.contains_zero() {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        }
    }
}

fn root_of_substituted(coeffs: &[BigRational], x: &AlgebraicNumber) -> bool {
    let q = QPoly::new(coeffs.to_vec());
    if q.is_zero() {
        return true;
    }
    x.minpoly().divides(&q.to_int_primitive())
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Status {
    Open,
    Rejected,
    Accepted(Option<f64>),
}

/// Complex-absolute-value certificate for a point `(x1, x2)` on `P = 0`.
///
/// Candidates `(j, alpha)` run over reduced `j` with `|j| <= D` and `alpha` in
/// the edge-root set, in order of `|j|`, then `j`, then `alpha`; the first
/// one satisfying the conclusion is returned.
pub fn certify(p: &LaurentPoly2, x1: &AlgebraicNumber, x2: &AlgebraicNumber) -> Result<Certificate> {
    if !vanishes_at(p, x1, x2)? {
        return Err(Error::InvalidArgument("point does not lie on P = 0".into()));
    }
    let nd = newton_data(p, &Mode::Archimedean)?;
    let d2 = nd.diameter_sq;
    let scale = 16.0 * d2 as f64;

    // hypothesis |L| > threshold
    let mut hyp = None;
    let mut last = (0.0, 0.0);
    for &bits in &BIT_SCHEDULE {
        let (_, lo, hi) = log_vector(x1, x2, bits).ok_or(Error::ZeroInput("point coordinate"))?;
        last = (lo, hi);
        if lo > nd.threshold + slack(nd.threshold) {
            hyp = Some(true);
            break;
        }
        if hi <= nd.threshold {
            hyp = Some(false);
            break;
        }
    }
    match hyp {
        Some(true) => {}
        Some(false) => {
            return Err(Error::HypothesisNotMet { norm: (last.0 + last.1) / 2.0, threshold: nd.threshold })
        }
        None => return Err(Error::Precision("cannot separate |L| from the threshold".into())),
    }

    let sigma = sigma_set(p);
    let cands: Vec<([i64; 2], &AlgebraicNumber)> = reduced_directions(d2)
        .into_iter()
        .flat_map(|j| sigma.iter().map(move |a| (j, a)))
        .collect();
    let mut status = vec![Status::Open; cands.len()];
    let mut exact_tried = vec![false; cands.len()];
    let xs = [x1.clone(), x2.clone()];

    for (level, &bits) in BIT_SCHEDULE.iter().enumerate() {
        let last = level + 1 == BIT_SCHEDULE.len();
        let (lv, nlo, nhi) = log_vector(x1, x2, bits).ok_or(Error::ZeroInput("point coordinate"))?;
        let cut_strong = -nhi / scale;
        let cut_weak = -nlo / scale;
        let mut winner = None;
        for (k, &(j, alpha)) in cands.iter().enumerate() {
            if status[k] == Status::Open {
                let w = monomial_disk(x1, x2, j, bits).map(|z| z.sub(&alpha.disk(bits + 16)));
                status[k] = match w.as_ref().map(|w| w.ln_abs_bounds()) {
                    None => Status::Open,
                    Some(Some((lo, hi))) => {
                        if hi + slack(hi) <= cut_strong {
                            Status::Accepted(Some(hi + slack(hi)))
                        } else if lo - slack(lo) > cut_weak {
                            Status::Rejected
                        } else {
                            Status::Open
                        }
                    }
                    Some(None) if !exact_tried[k] => {
                        exact_tried[k] = true;
                        if AlgebraicNumber::monomial(&xs, &j)? == *alpha {
                            Status::Accepted(None)
                        } else {
                            Status::Open
                        }
                    }
                    Some(None) => Status::Open,
                };
            }
            match status[k] {
                Status::Rejected => {}
                // earlier undecided candidates block later ones until the last level
                Status::Open if !last => break,
                Status::Open => {}
                Status::Accepted(lhs) => {
                    winner = Some((k, lhs));
                    break;
                }
            }
        }
        if let Some((k, lhs)) = winner {
            let (j, alpha) = cands[k];
            return Ok(Certificate {
                j,
                alpha: alpha.clone(),
                case: if lhs.is_some() { CertificateCase::Inequality } else { CertificateCase::ExactEquality },
                lhs,
                bound: -nhi / scale,
                log_vector: lv,
                norm: (nlo + nhi) / 2.0,
                diameter_sq: d2,
            });
        }
        if last && status.contains(&Status::Open) {
            return Err(Error::Precision("certificate candidates undecided at maximum precision".into()));
        }
    }
    Err(Error::NoCertificateFound)
}

/// p-adic certificate in exact valuation arithmetic; `ln|y|_p = -v_p(y) ln p`.
#[derive(Clone, Debug)]
pub struct PadicCertificate {
    pub prime: BigInt,
    pub j: [i64; 2],
    /// Minimal polynomial of `alpha`; the valuation below is the largest one
    /// over its conjugates, which is independent of the chosen extension.
    pub alpha_minpoly: IntPoly,
    pub alpha_rational: Option<BigRational>,
    pub case: CertificateCase,
    /// `v_p(x1^{j1} x2^{j2} - alpha)`; `None` in the exact case.
    pub valuation: Option<BigRational>,
    /// Valuation vector `(v_p(x1), v_p(x2))`; the log-vector is `-ln p` times it.
    pub valuations: [i64; 2],
    pub lhs: Option<f64>,
    pub bound: f64,
    pub diameter_sq: i64,
}

impl PadicCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "prime": self.prime.to_string(),
            "j": self.j,
            "alpha": {
                "minpoly": self.alpha_minpoly.fmt_var("X"),
                "value": self.alpha_rational.as_ref().map(fmt_rational),
            },
            "case": self.case,
            "valuation": self.valuation.as_ref().map(fmt_rational),
            "valuations": self.valuations,
            "lhs": self.lhs,
            "bound": self.bound,
        })
    }
}

/// Largest `v_p(alpha - z)` over the roots `alpha` of the irreducible `m`.
fn max_root_valuation(m: &IntPoly, z: &BigRational, p: &BigInt) -> BigRational {
    // R(T) = b^d m((T + a)/b) has roots b(alpha - z)
    let (a, b) = (z.numer(), z.denom());
    let d = m.deg();
    let lin = IntPoly::new(vec![a.clone(), BigInt::one()]);
    let mut r = IntPoly::zero();
    let mut pw = IntPoly::one();
    for k in 0..=d {
        let bk = num_traits::pow(b.clone(), d - k);
        r = &r + &pw.scale(&(m.coeff(k) * bk));
        pw = &pw * &lin;
    }
    let shift = int_valuation(b, p);
    if r.coeff(0).is_zero() {
        // alpha = z; callers handle this as the exact case
        return BigRational::from_integer(BigInt::from(i64::MAX));
    }
    let prof = newton_polygon_profile(&r, p);
    let min_exp = prof.iter().map(|e| e.exponent.clone()).min().expect("nonconstant");
    -min_exp - BigRational::from_integer(shift.into())
}

/// Certificate for a rational point in the p-adic absolute value.
pub fn certify_padic(
    p: &LaurentPoly2,
    x1: &BigRational,
    x2: &BigRational,
    prime: &BigInt,
) -> Result<PadicCertificate> {
    check_prime(prime)?;
    if !p.eval_rational(x1, x2)?.is_zero() {
        return Err(Error::InvalidArgument("point does not lie on P = 0".into()));
    }
    let nd = newton_data(p, &Mode::NonArchimedean(prime.clone()))?;
    let d2 = nd.diameter_sq;
    let v = [rational_valuation(x1, prime), rational_valuation(x2, prime)];
    let vn2 = BigInt::from(v[0]) * v[0] + BigInt::from(v[1]) * v[1];
    let vals: Vec<i64> = p.terms.iter().map(|(_, c)| rational_valuation(c, prime)).collect();
    let gap = vals.iter().max().unwrap() - vals.iter().min().unwrap();
    let lnp = ln_abs_int(prime);
    let norm = (vn2.to_f64().unwrap()).sqrt() * lnp;
    // |v| > 16 D^2 gap, squared
    let thr2 = BigInt::from(16 * d2 * gap).pow(2);
    if vn2 <= thr2 {
        return Err(Error::HypothesisNotMet { norm, threshold: nd.threshold });
    }
    let bound = -norm / (16.0 * d2 as f64);
    let sixteen_d2 = BigInt::from(16 * d2);
    for j in reduced_directions(d2) {
        let z = rpow(x1, j[0]) * rpow(x2, j[1]);
        for alpha in sigma_set(p) {
            let m = alpha.minpoly().clone();
            let (case, val) = match alpha.as_rational() {
                Some(q) if q == z => (CertificateCase::ExactEquality, None),
                Some(q) => {
                    let w = &z - &q;
                    (CertificateCase::Inequality, Some(BigRational::from_integer(rational_valuation(&w, prime).into())))
                }
                None => (CertificateCase::Inequality, Some(max_root_valuation(&m, &z, prime))),
            };
            let ok = match &val {
                None => true,
                Some(val) => {
                    // 16 D^2 val >= |v|
                    !val.is_negative() && {
                        let lhs = &sixteen_d2 * val.numer();
                        &lhs * &lhs >= &vn2 * val.denom() * val.denom()
                    }
                }
            };
            if ok {
                let lhs = val.as_ref().map(|q| -rational_to_f64(q) * lnp);
                return Ok(PadicCertificate {
                    prime: prime.clone(),
                    j,
                    alpha_rational: alpha.as_rational(),
                    alpha_minpoly: m,
                    case,
                    valuation: val,
                    valuations: v,
                    lhs,
                    bound,
                    diameter_sq: d2,
                });
            }
        }
    }
    Err(Error::NoCertificateFound)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(s: &str) -> LaurentPoly2 {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn newton_data_line() {
        let nd = newton_data(&lp("X + Y - 1"), &Mode::Archimedean).unwrap();
        assert_eq!(nd.diameter_sq, 2);
        assert_eq!(nd.sigma, 2);
        assert_eq!(nd.coeff_gap, 0.0);
        assert!((nd.threshold - 32.0 * 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn newton_data_binomials() {
        let nd = newton_data(&lp("X - Y"), &Mode::NonArchimedean(5.into())).unwrap();
        assert_eq!((nd.sigma, nd.threshold), (1, 0.0));
        let nd = newton_data(&lp("X^2*Y - 3"), &Mode::Archimedean).unwrap();
        assert_eq!(nd.diameter_sq, 5);
        assert!((nd.coeff_gap - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn too_few_terms() {
        assert!("X".parse::<LaurentPoly2>().is_err());
        assert!("X + 1 - X".parse::<LaurentPoly2>().is_err());
    }

    #[test]
    fn edges_of_line() {
        let p = lp("X + Y - 1");
        let e = build_sigma(&p);
        let dirs: Vec<[i64; 2]> = e.iter().map(|e| e.direction).collect();
        assert_eq!(dirs, vec![[0, 1], [1, 0], [1, -1]]);
        let anti = &e[2];
        assert_eq!(anti.roots.len(), 1);
        assert_eq!(anti.roots[0].0.as_rational(), Some(q(-1, 1)));
        assert_eq!(e[1].roots[0].0.as_rational(), Some(q(1, 1)));
        let s = sigma_set(&p);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn binomial_edge() {
        let p = lp("X*Y - 1");
        let e = build_sigma(&p);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].direction, [1, 1]);
        assert!(e[0].roots[0].0.is_one());
    }

    #[test]
    fn edge_multiplicity_and_irrational_roots() {
        // collinear support: T^2 - 2 along (1,0), T = X
        let p = lp("X^2 - 2");
        let e = build_sigma(&p);
        assert_eq!(e.len(), 1);
        assert_eq!(e[0].roots.len(), 2);
        let p = lp("X^2 - 2*X + 1 + Y");
        let e: Vec<_> = build_sigma(&p).into_iter().filter(|e| e.direction == [1, 0]).collect();
        assert_eq!(e[0].roots, vec![(AlgebraicNumber::one(), 2)]);
    }

    #[test]
    fn certify_large_point() {
        let p = lp("X + Y - 1");
        let x1 = AlgebraicNumber::rational(&q(100_000_000, 1));
        let x2 = AlgebraicNumber::rational(&q(1 - 100_000_000, 1));
        let c = certify(&p, &x1, &x2).unwrap();
        assert_eq!(c.j, [1, -1]);
        assert_eq!(c.alpha.as_rational(), Some(q(-1, 1)));
        assert_eq!(c.case, CertificateCase::Inequality);
        let lhs = c.lhs.unwrap();
        assert!((lhs + (1e8f64 - 1.0).ln()).abs() < 1e-6);
        assert!((c.bound + c.norm / 32.0).abs() < 1e-9);
        assert!(c.verify(&x1, &x2).unwrap());
    }

    #[test]
    fn certify_small_point() {
        let p = lp("X + Y - 1");
        let x1 = AlgebraicNumber::rational(&q(1, 10_000_000_000));
        let x2 = AlgebraicNumber::rational(&(q(1, 1) - q(1, 10_000_000_000)));
        let c = certify(&p, &x1, &x2).unwrap();
        assert_eq!(c.j, [0, 1]);
        assert!(c.alpha.is_one());
        // 1e-8 misses the threshold
        let y1 = AlgebraicNumber::rational(&q(1, 100_000_000));
        let y2 = AlgebraicNumber::rational(&(q(1, 1) - q(1, 100_000_000)));
        assert!(matches!(certify(&p, &y1, &y2), Err(Error::HypothesisNotMet { .. })));
    }

    #[test]
    fn certify_exact_binomial() {
        let p = lp("X*Y - 1");
        let two = BigInt::from(2);
        let big = BigRational::from_integer(two.pow(100u32));
        let x1 = AlgebraicNumber::rational(&big);
        let x2 = AlgebraicNumber::rational(&big.recip());
        let c = certify(&p, &x1, &x2).unwrap();
        assert_eq!(c.j, [1, 1]);
        assert_eq!(c.case, CertificateCase::ExactEquality);
        assert!(c.alpha.is_one());
        assert!(c.verify(&x1, &x2).unwrap());
    }

    #[test]
    fn certify_rejects_off_curve() {
        let p = lp("X + Y - 1");
        let x1 = AlgebraicNumber::from_int(1000);
        assert!(matches!(certify(&p, &x1, &x1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn padic_examples() {
        let p = lp("X + Y - 1");
        let pr = BigInt::from(7);
        let c = certify_padic(&p, &q(1, 7), &q(6, 7), &pr).unwrap();
        assert_eq!(c.j, [1, -1]);
        assert_eq!(c.alpha_rational, Some(q(-1, 1)));
        assert_eq!(c.valuations, [-1, -1]);
        let c = certify_padic(&p, &q(49, 1), &q(-48, 1), &pr).unwrap();
        assert_eq!(c.j, [0, 1]);
        assert_eq!(c.alpha_rational, Some(q(1, 1)));
        assert!(matches!(
            certify_padic(&p, &q(2, 1), &q(-1, 1), &pr),
            Err(Error::HypothesisNotMet { .. })
        ));
    }

    #[test]
    fn padic_irrational_edge_root() {
        // X^2 - 2 Y^2 + ... : direction (1,-1) edge polynomial T^2 - 2
        let p = lp("X^2 - 2*Y^2 + 7*X*Y^3");
        let pr = BigInt::from(7);
        let m = IntPoly::from_i64(&[-2, 0, 1]);
        // 3^2 = 2 mod 7, so v_7(3 - sqrt 2) >= 1 at one place
        let v = max_root_valuation(&m, &q(3, 1), &pr);
        assert!(v >= q(1, 1));
        let _ = newton_data(&p, &Mode::NonArchimedean(pr)).unwrap();
    }

    #[test]
    fn directions_sorted() {
        let d = reduced_directions(2);
        assert_eq!(d, vec![[0, 1], [1, 0], [1, -1], [1, 1]]);
        assert_eq!(reduce_direction([-2, 4]), [1, -2]);
        assert_eq!(reduce_direction([0, -3]), [0, 1]);
    }
}
