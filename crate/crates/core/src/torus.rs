//! Intersection of a parametrized curve with the unit torus `|x_i| = 1`:
//! exact candidate elimination, an interval subdivision solver on the real
//! system, and the conjugation test after the Cayley transform.

use crate::algnum::AlgebraicNumber;
use crate::arith::ln_abs_int;
use crate::curves::{ratfunc_disk, ParametricCurve};
use crate::dyadic::Dy;
use crate::poly::{isolate_squarefree, resultant, sylvester_resultant, BiPoly, Eliminate, IntPoly, RatFunc};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeSet, HashSet, VecDeque};

const CERT_BITS: [u64; 4] = [64, 128, 256, 512];
const MAX_LEAVES: usize = 400_000;
const CURVE_SPAN: i64 = 16;

/// `(ln|x_1|, ..., ln|x_N|)` for complex coordinates given as `(re, im)`.
pub fn log_vector(x: &[(f64, f64)]) -> Result<Vec<f64>> {
    x.iter()
        .map(|&(re, im)| {
            let m = re.hypot(im);
            if m == 0.0 {
                Err(Error::ZeroInput("log-vector of a point with a zero coordinate"))
            } else {
                Ok(m.ln())
            }
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TorusStatus {
    Finite,
    Infinite,
    Unknown,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusPoint {
    /// Parameter value `(re, im)`.
    pub t: [f64; 2],
    pub t_minpoly: Vec<String>,
    pub t_index: usize,
    pub x: Vec<[f64; 2]>,
    /// Certified bound on `max_i ||f_i(t)| - 1|`.
    pub residual: f64,
}

/// A real point on the transformed curve where it has a smooth real branch.
#[derive(Clone, Debug, Serialize)]
pub struct InfinitudeWitness {
    /// Coordinate pair (0-based) the test was run on.
    pub pair: [usize; 2],
    /// Real-coefficient form of the transformed equation.
    pub real_form: String,
    /// Real point `(w1, w2)` on it; the first entry is rational.
    pub w: [f64; 2],
    /// The corresponding point on the torus.
    pub x: [[f64; 2]; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct SubdivisionSummary {
    pub radius: f64,
    pub cell: f64,
    pub leaves: usize,
    pub isolated: Vec<[f64; 2]>,
    pub curve_like_clusters: usize,
    /// Whether the isolated numeric solutions match the exact points one-to-one.
    pub agrees_with_exact: Option<bool>,
    pub exhausted: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorusReport {
    pub status: TorusStatus,
    pub points: Vec<TorusPoint>,
    pub witness: Option<InfinitudeWitness>,
    /// Primitive polynomial in `t` containing every parameter of a torus point
    /// (absent when elimination degenerates).
    pub candidate_poly: Option<Vec<String>>,
    pub subdivision: SubdivisionSummary,
    pub tolerance: f64,
}

#[derive(Clone, Debug)]
pub struct TorusOptions {
    pub tol: f64,
    /// Half-width of the square search region; derived from the candidate
    /// polynomial when absent.
    pub radius: Option<f64>,
    /// Subdivision depth: the finest cells have side `2 * radius / 2^depth`.
    pub depth: u32,
}

impl Default for TorusOptions {
    fn default() -> Self {
        TorusOptions { tol: 1e-9, radius: None, depth: 10 }
    }
}

/// `u(t) u(s) - v(t) v(s)`; on `s = conj(t)` it is `|u(t)|^2 - |v(t)|^2`.
fn modulus_equation(f: &RatFunc) -> BiPoly {
    let (u, v) = (f.num(), f.den());
    BiPoly::from_x(u).mul(&BiPoly::from_y(u)).sub(&BiPoly::from_x(v).mul(&BiPoly::from_y(v)))
}

enum Elimination {
    /// No parameter maps into the torus.
    Empty,
    Poly(IntPoly),
    Degenerate,
}

fn eliminate_conjugate(eqs: &[BiPoly]) -> Result<Elimination> {
    let live: Vec<&BiPoly> = eqs.iter().filter(|g| !g.is_zero()).collect();
    if live.iter().any(|g| g.is_constant()) {
        return Ok(Elimination::Empty);
    }
    let mut acc: Option<IntPoly> = None;
    for i in 0..live.len() {
        for k in i + 1..live.len() {
            let r = resultant(live[i], live[k], Eliminate::Y)?;
            if r.is_zero() {
                continue;
            }
            acc = Some(match acc {
                None => r.primitive(),
                Some(a) => a.gcd(&r),
            });
        }
    }
    Ok(match acc {
        None => Elimination::Degenerate,
        Some(p) if p.is_constant() => Elimination::Empty,
        Some(p) => Elimination::Poly(p),
    })
}

/// Interval for `|f(t)|^2`, or `None` when the enclosure is unusable.
fn modulus_sq_bounds(f: &RatFunc, t: &AlgebraicNumber, bits: u64) -> Option<(Dy, Dy)> {
    let d = ratfunc_disk(f, t, bits)?;
    let lo = d.abs_lower();
    let hi = d.abs_upper();
    Some((lo.square(), hi.square()))
}

/// Decides `|f_i(t)| = 1` for all `i`; returns the certified residual.
fn on_torus(c: &ParametricCurve, t: &AlgebraicNumber) -> Option<f64> {
    for (level, &bits) in CERT_BITS.iter().enumerate() {
        let mut inside = true;
        let mut residual: f64 = 0.0;
        for f in c.coords() {
            let (lo, hi) = modulus_sq_bounds(f, t, bits)?;
            if hi < Dy::one() || lo > Dy::one() {
                return None;
            }
            // |m - 1| <= |m^2 - 1| for m >= 0
            let r = (hi.to_f64() - 1.0).abs().max((1.0 - lo.to_f64()).abs());
            residual = residual.max(r);
            if !(lo <= Dy::one() && Dy::one() <= hi) {
                inside = false;
            }
        }
        if inside && level + 1 == CERT_BITS.len() {
            return Some(residual);
        }
    }
    None
}

fn bits_for_tol(tol: f64) -> u64 {
    ((-tol.max(1e-300).log2()).ceil().max(1.0) as u64) + 8
}

fn cauchy_radius(p: &IntPoly) -> f64 {
    let lc = ln_abs_int(&p.lc());
    let worst = p.coeffs()[..p.deg()]
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| ln_abs_int(c) - lc)
        .fold(f64::NEG_INFINITY, f64::max);
    1.0 + worst.exp()
}

/// Torus points of the curve with status and a numeric cross-check.
pub fn torus_points(c: &ParametricCurve, opts: &TorusOptions) -> Result<TorusReport> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let eqs: Vec<BiPoly> = c.coords().iter().map(modulus_equation).collect();
    let elim = eliminate_conjugate(&eqs)?;
    let mut points = Vec::new();
    let mut candidate_poly = None;
    let default_radius = match &elim {
        Elimination::Poly(p) => 1.05 * cauchy_radius(p),
        _ => {
            let mut r: f64 = 2.0;
            for f in c.coords() {
                for p in [f.num(), f.den()] {
                    if p.deg() > 0 {
                        r = r.max(1.05 * cauchy_radius(p));
                    }
                }
            }
            r
        }
    };
    if let Elimination::Poly(p) = &elim {
        candidate_poly = Some(p.coeff_strings());
        let bits = bits_for_tol(opts.tol);
        for q in p.irreducible_factors() {
            if c.coords().iter().any(|f| q.divides(f.num()) || q.divides(f.den())) {
                continue;
            }
            for t in AlgebraicNumber::all_roots(&q)? {
                let Some(residual) = on_torus(c, &t) else { continue };
                let tc = t.disk(bits).center.to_f64();
                let x = c
                    .coords()
                    .iter()
                    .map(|f| {
                        let d = ratfunc_disk(f, &t, bits).expect("torus point is not a pole");
                        let (re, im) = d.center.to_f64();
                        [re, im]
                    })
                    .collect();
                points.push(TorusPoint {
                    t: [tc.0, tc.1],
                    t_minpoly: q.coeff_strings(),
                    t_index: t.index(),
                    x,
                    residual,
                });
            }
        }
        points.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
    }
    let radius = opts.radius.unwrap_or(default_radius);
    let mut subdivision = subdivide(c, radius, opts.depth);
    let (status, witness) = match elim {
        Elimination::Empty | Elimination::Poly(_) => {
            let agrees = subdivision.exhausted
                && subdivision.curve_like_clusters == 0
                && matches_one_to_one(&subdivision.isolated, &points, radius);
            subdivision.agrees_with_exact = Some(agrees);
            (TorusStatus::Finite, None)
        }
        Elimination::Degenerate => match degenerate_witness(c, &eqs)? {
            Some(w) => (TorusStatus::Infinite, Some(w)),
            None => (TorusStatus::Unknown, None),
        },
    };
    Ok(TorusReport { status, points, witness, candidate_poly, subdivision, tolerance: opts.tol })
}

fn matches_one_to_one(numeric: &[[f64; 2]], exact: &[TorusPoint], radius: f64) -> bool {
    let inside: Vec<&TorusPoint> =
        exact.iter().filter(|p| p.t[0].abs() <= radius && p.t[1].abs() <= radius).collect();
    if inside.len() != numeric.len() {
        return false;
    }
    inside.iter().all(|p| {
        numeric
            .iter()
            .any(|q| (q[0] - p.t[0]).hypot(q[1] - p.t[1]) <= 1e-6 * (1.0 + p.t[0].hypot(p.t[1])))
    })
}

/// A witness for infinitely many torus points when the conjugate elimination
/// degenerates: the pair test, valid for the whole curve when the pair's
/// common factor divides every modulus equation.
fn degenerate_witness(c: &ParametricCurve, eqs: &[BiPoly]) -> Result<Option<InfinitudeWitness>> {
    let n = c.dim();
    let a = match c.coords().iter().position(|f| !f.is_constant()) {
        Some(a) => a,
        None => return Ok(None),
    };
    let b = if a == 0 { 1 } else { 0 };
    if n > 2 {
        let g = eqs[a].gcd(&eqs[b]);
        if g.is_constant() {
            return Ok(None);
        }
        for e in eqs {
            if !e.is_zero() && e.exact_div(&g).is_none() {
                return Ok(None);
            }
        }
    }
    let q = implicitize(&c.coords()[a], &c.coords()[b])?;
    Ok(infinitude_test(&q).witness.map(|mut w| {
        w.pair = [a, b];
        w
    }))
}

/// Implicit equation `Q(x1, x2) = 0` of `t -> (f(t), g(t))`, square-free.
pub fn implicitize(f: &RatFunc, g: &RatFunc) -> Result<BiPoly> {
    let side = |r: &RatFunc, var_x: bool| -> Vec<BiPoly> {
        let d = r.num().deg().max(r.den().deg());
        let mut out: Vec<BiPoly> = (0..=d)
            .map(|k| {
                let var = if var_x { BiPoly::term(r.den().coeff(k), 1, 0) } else { BiPoly::term(r.den().coeff(k), 0, 1) };
                BiPoly::constant(r.num().coeff(k)).sub(&var)
            })
            .collect();
        while out.last().is_some_and(|c| c.is_zero()) {
            out.pop();
        }
        out
    };
    let a = side(f, true);
    let b = side(g, false);
    if a.is_empty() || b.is_empty() {
        return Err(Error::Degenerate("implicitization of a zero coordinate".into()));
    }
    let r = sylvester_resultant(&a, &b);
    if r.is_zero() {
        return Err(Error::Degenerate("implicitization resultant vanished".into()));
    }
    Ok(r.squarefree_part())
}

/// Polynomial with Gaussian-integer coefficients, `re + i im`.
#[derive(Clone, Debug, PartialEq)]
struct GaussBi {
    re: BiPoly,
    im: BiPoly,
}

impl GaussBi {
    fn real(p: BiPoly) -> Self {
        GaussBi { re: p, im: BiPoly::zero() }
    }

    fn add(&self, o: &GaussBi) -> GaussBi {
        GaussBi { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    fn mul(&self, o: &GaussBi) -> GaussBi {
        GaussBi {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    fn scale(&self, c: &BigInt) -> GaussBi {
        let k = BiPoly::constant(c.clone());
        GaussBi { re: self.re.mul(&k), im: self.im.mul(&k) }
    }

    fn pow(&self, k: usize) -> GaussBi {
        let mut acc = GaussBi::real(BiPoly::constant(BigInt::one()));
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// If `self = lambda * conj(self)`, the real polynomial `Re(conj(c0) self)`
    /// where `c0` is a nonzero coefficient.
    fn conjugation_real_form(&self) -> Option<BiPoly> {
        let mut keys: BTreeSet<(usize, usize)> = BTreeSet::new();
        for (i, j, _) in self.re.terms().into_iter().chain(self.im.terms()) {
            keys.insert((i, j));
        }
        let &(i0, j0) = keys.iter().next()?;
        let (a0, b0) = (self.re.coeff(i0, j0), self.im.coeff(i0, j0));
        let mut out = BiPoly::zero();
        for &(i, j) in &keys {
            let (a, b) = (self.re.coeff(i, j), self.im.coeff(i, j));
            // Im((a + ib)(a0 - i b0)) must vanish
            if &b * &a0 != &a * &b0 {
                return None;
            }
            out = out.add(&BiPoly::term(&a * &a0 + &b * &b0, i, j));
        }
        Some(out.normalize())
    }
}

/// `(1 + i w)^k (1 - i w)^(d - k)` in the chosen variable.
fn cayley_factor(k: usize, d: usize, in_x: bool) -> GaussBi {
    let w = if in_x { BiPoly::term(BigInt::one(), 1, 0) } else { BiPoly::term(BigInt::one(), 0, 1) };
    let one = BiPoly::constant(BigInt::one());
    let plus = GaussBi { re: one.clone(), im: w.clone() };
    let minus = GaussBi { re: one, im: w.neg() };
    plus.pow(k).mul(&minus.pow(d - k))
}

#[derive(Clone, Debug, Serialize)]
pub struct InfinitudeResult {
    /// The transformed equation is a scalar multiple of its conjugate.
    pub conjugation_proportional: bool,
    pub witness: Option<InfinitudeWitness>,
}

/// Substitutes `x_k = (1 + i w_k) / (1 - i w_k)`, which maps the real line onto
/// the unit circle, and looks for a smooth real point of the transformed curve.
pub fn infinitude_test(q: &BiPoly) -> InfinitudeResult {
    let (dx, dy) = (q.deg_x(), q.deg_y());
    let fx: Vec<GaussBi> = (0..=dx).map(|k| cayley_factor(k, dx, true)).collect();
    let fy: Vec<GaussBi> = (0..=dy).map(|k| cayley_factor(k, dy, false)).collect();
    let mut t = GaussBi::real(BiPoly::zero());
    for (i, j, c) in q.terms() {
        t = t.add(&fx[i].mul(&fy[j]).scale(&c));
    }
    let Some(real) = t.conjugation_real_form() else {
        return InfinitudeResult { conjugation_proportional: false, witness: None };
    };
    let witness = smooth_real_point(&real.squarefree_part()).map(|(w1, w2)| {
        let to_circle = |w: f64| {
            let d = 1.0 + w * w;
            [(1.0 - w * w) / d, 2.0 * w / d]
        };
        InfinitudeWitness {
            pair: [0, 1],
            real_form: format_bipoly(&real),
            w: [w1, w2],
            x: [to_circle(w1), to_circle(w2)],
        }
    });
    InfinitudeResult { conjugation_proportional: true, witness }
}

/// A real point where `R(w1, .)` has a simple real root, so the real zero set
/// of `R` is a smooth curve nearby.
fn smooth_real_point(r: &BiPoly) -> Option<(f64, f64)> {
    let samples: Vec<BigRational> = [(0, 1), (1, 1), (-1, 1), (1, 2), (-1, 2), (2, 1), (-2, 1), (1, 3), (3, 1), (-3, 1)]
        .iter()
        .map(|&(a, b)| BigRational::new(a.into(), b.into()))
        .collect();
    for w1 in samples {
        let coeffs = r.eval_x_rational(&w1);
        let p = crate::poly::QPoly::new(coeffs);
        if p.is_zero() || p.is_constant() {
            continue;
        }
        let ip = p.to_int_primitive();
        for (f, m) in ip.factor().factors {
            if m != 1 {
                continue;
            }
            if let Some(b) = isolate_squarefree(&f).into_iter().find(|b| b.is_real()) {
                let w2 = b.to_f64().0;
                return Some((w1.numer().to_f64()? / w1.denom().to_f64()?, w2));
            }
        }
    }
    None
}

fn format_bipoly(p: &BiPoly) -> String {
    let mut parts = Vec::new();
    let mut terms = p.terms();
    terms.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
    for (k, (i, j, c)) in terms.iter().enumerate() {
        let mut mono = Vec::new();
        for (v, e) in [("w1", *i), ("w2", *j)] {
            match e {
                0 => {}
                1 => mono.push(v.to_string()),
                e => mono.push(format!("{}^{}", v, e)),
            }
        }
        let a = c.abs();
        let body = if mono.is_empty() {
            a.to_string()
        } else if a.is_one() {
            mono.join("*")
        } else {
            format!("{}*{}", a, mono.join("*"))
        };
        let sign = if c.is_negative() { "-" } else { "+" };
        if k == 0 {
            parts.push(if c.is_negative() { format!("-{}", body) } else { body });
        } else {
            parts.push(format!("{} {}", sign, body));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" ")
    }
}

/// Whether some coordinate pair with a nonconstant projection meets the torus
/// in finitely many points; returns the first such pair.
pub fn finite_pair(c: &ParametricCurve) -> Result<Option<(usize, usize)>> {
    let n = c.dim();
    let eqs: Vec<BiPoly> = c.coords().iter().map(modulus_equation).collect();
    for i in 0..n {
        for j in i + 1..n {
            if c.coords()[i].is_constant() && c.coords()[j].is_constant() {
                continue;
            }
            match eliminate_conjugate(&[eqs[i].clone(), eqs[j].clone()])? {
                Elimination::Degenerate => continue,
                _ => return Ok(Some((i, j))),
            }
        }
    }
    Ok(None)
}

/// Sufficient condition for a finite torus intersection through a projection.
pub fn pair_finiteness_for_theorem(c: &ParametricCurve) -> Result<bool> {
    Ok(finite_pair(c)?.is_some())
}

/// Real polynomial in `(u, v)` as float terms, for interval evaluation.
#[derive(Clone, Debug)]
struct RealPoly {
    terms: Vec<(usize, usize, f64)>,
    deg: usize,
}

impl RealPoly {
    fn from_bipoly(p: &BiPoly) -> Self {
        let terms: Vec<(usize, usize, f64)> =
            p.terms().into_iter().map(|(i, j, c)| (i, j, crate::poly::big_to_f64(&c))).collect();
        let deg = terms.iter().map(|t| t.0.max(t.1)).max().unwrap_or(0);
        RealPoly { terms, deg }
    }

    fn eval(&self, u: f64, v: f64) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * u.powi(i as i32) * v.powi(j as i32)).sum()
    }

    /// Enclosure over a box with outward padding for rounding.
    fn eval_box(&self, u: (f64, f64), v: (f64, f64)) -> (f64, f64) {
        let up = interval_powers(u, self.deg);
        let vp = interval_powers(v, self.deg);
        let (mut lo, mut hi, mut mag) = (0.0, 0.0, 0.0f64);
        for &(i, j, c) in &self.terms {
            let m = imul(up[i], vp[j]);
            let t = if c >= 0.0 { (c * m.0, c * m.1) } else { (c * m.1, c * m.0) };
            lo += t.0;
            hi += t.1;
            mag += t.0.abs().max(t.1.abs());
        }
        let pad = 1e-12 * mag + f64::MIN_POSITIVE;
        (lo - pad, hi + pad)
    }
}

fn imul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let p = [a.0 * b.0, a.0 * b.1, a.1 * b.0, a.1 * b.1];
    (p.iter().cloned().fold(f64::INFINITY, f64::min), p.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}

fn interval_powers(a: (f64, f64), d: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(1.0, 1.0)];
    for k in 1..=d {
        let p = if k % 2 == 0 {
            let (l, h) = (a.0.abs().min(a.1.abs()), a.0.abs().max(a.1.abs()));
            let l = if a.0 <= 0.0 && a.1 >= 0.0 { 0.0 } else { l };
            (l.powi(k as i32), h.powi(k as i32))
        } else {
            (a.0.powi(k as i32), a.1.powi(k as i32))
        };
        out.push(p);
    }
    out
}

/// `|p(u + i v)|^2` as an integer polynomial in `(u, v)`.
fn modulus_sq_uv(p: &IntPoly) -> BiPoly {
    let t = GaussBi { re: BiPoly::term(BigInt::one(), 1, 0), im: BiPoly::term(BigInt::one(), 0, 1) };
    let mut acc = GaussBi::real(BiPoly::zero());
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(&t).add(&GaussBi::real(BiPoly::constant(c.clone())));
    }
    acc.re.mul(&acc.re).add(&acc.im.mul(&acc.im))
}

struct RealSystem {
    eqs: Vec<RealPoly>,
    du: Vec<RealPoly>,
    dv: Vec<RealPoly>,
}

impl RealSystem {
    fn new(c: &ParametricCurve) -> Self {
        let polys: Vec<BiPoly> = c
            .coords()
            .iter()
            .map(|f| modulus_sq_uv(f.num()).sub(&modulus_sq_uv(f.den())))
            .filter(|p| !p.is_zero())
            .collect();
        RealSystem {
            eqs: polys.iter().map(RealPoly::from_bipoly).collect(),
            du: polys.iter().map(|p| RealPoly::from_bipoly(&p.derivative_x())).collect(),
            dv: polys.iter().map(|p| RealPoly::from_bipoly(&p.derivative_y())).collect(),
        }
    }

    fn excludes(&self, u: (f64, f64), v: (f64, f64)) -> bool {
        self.eqs.iter().any(|e| {
            let (lo, hi) = e.eval_box(u, v);
            lo > 0.0 || hi < 0.0
        })
    }

    /// Gauss-Newton on the (possibly overdetermined) real system.
    fn refine(&self, mut u: f64, mut v: f64) -> (f64, f64) {
        for _ in 0..60 {
            let (mut a11, mut a12, mut a22, mut g1, mut g2) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for k in 0..self.eqs.len() {
                let f = self.eqs[k].eval(u, v);
                let (ju, jv) = (self.du[k].eval(u, v), self.dv[k].eval(u, v));
                a11 += ju * ju;
                a12 += ju * jv;
                a22 += jv * jv;
                g1 += ju * f;
                g2 += jv * f;
            }
            let det = a11 * a22 - a12 * a12;
            if det.abs() < 1e-300 {
                break;
            }
            let du = -(a22 * g1 - a12 * g2) / det;
            let dv = -(a11 * g2 - a12 * g1) / det;
            u += du;
            v += dv;
            if du.hypot(dv) <= 1e-15 * (1.0 + u.hypot(v)) {
                break;
            }
        }
        (u, v)
    }
}

fn subdivide(c: &ParametricCurve, radius: f64, depth: u32) -> SubdivisionSummary {
    let sys = RealSystem::new(c);
    let cells_per_side = 1i64 << depth;
    let cell = 2.0 * radius / cells_per_side as f64;
    // split the root box once into a grid of independent tasks
    let split = 3.min(depth);
    let tasks: Vec<(i64, i64)> =
        (0..1i64 << split).flat_map(|i| (0..1i64 << split).map(move |j| (i, j))).collect();
    let per_task = 1i64 << (depth - split);
    let results: Vec<Option<Vec<(i64, i64)>>> = tasks
        .par_iter()
        .map(|&(i, j)| {
            let mut leaves = Vec::new();
            let mut stack = vec![(i * per_task, j * per_task, per_task)];
            while let Some((ci, cj, size)) = stack.pop() {
                let u = (-radius + ci as f64 * cell, -radius + (ci + size) as f64 * cell);
                let v = (-radius + cj as f64 * cell, -radius + (cj + size) as f64 * cell);
                if sys.excludes(u, v) {
                    continue;
                }
                if size == 1 {
                    leaves.push((ci, cj));
                    if leaves.len() > MAX_LEAVES {
                        return None;
                    }
                    continue;
                }
                let h = size / 2;
                for (di, dj) in [(0, 0), (h, 0), (0, h), (h, h)] {
                    stack.push((ci + di, cj + dj, h));
                }
            }
            Some(leaves)
        })
        .collect();
    let exhausted = results.iter().all(|r| r.is_some());
    let mut cells: Vec<(i64, i64)> = results.into_iter().flatten().flatten().collect();
    cells.sort_unstable();
    let leaves = cells.len();
    let set: HashSet<(i64, i64)> = cells.iter().cloned().collect();
    let mut seen: HashSet<(i64, i64)> = HashSet::new();
    let mut isolated: Vec<[f64; 2]> = Vec::new();
    let mut curve_like = 0;
    for &start in &cells {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some((i, j)) = queue.pop_front() {
            for di in -1..=1 {
                for dj in -1..=1 {
                    let nb = (i + di, j + dj);
                    if set.contains(&nb) && seen.insert(nb) {
                        comp.push(nb);
                        queue.push_back(nb);
                    }
                }
            }
        }
        let (imin, imax) = (comp.iter().map(|c| c.0).min().unwrap(), comp.iter().map(|c| c.0).max().unwrap());
        let (jmin, jmax) = (comp.iter().map(|c| c.1).min().unwrap(), comp.iter().map(|c| c.1).max().unwrap());
        if imax - imin + 1 > CURVE_SPAN || jmax - jmin + 1 > CURVE_SPAN {
            curve_like += 1;
            continue;
        }
        let cu = -radius + (imin + imax + 1) as f64 * cell / 2.0;
        let cv = -radius + (jmin + jmax + 1) as f64 * cell / 2.0;
        let (u, v) = sys.refine(cu, cv);
        if !torus_residual_ok(c, u, v) {
            continue;
        }
        if !isolated.iter().any(|p| (p[0] - u).hypot(p[1] - v) < 1e-7 * (1.0 + u.hypot(v))) {
            isolated.push([u, v]);
        }
    }
    isolated.sort_by(|a, b| a.partial_cmp(b).unwrap());
    SubdivisionSummary {
        radius,
        cell,
        leaves,
        isolated,
        curve_like_clusters: curve_like,
        agrees_with_exact: None,
        exhausted,
    }
}

fn eval_complex(p: &IntPoly, u: f64, v: f64) -> (f64, f64) {
    let (mut re, mut im) = (0.0, 0.0);
    for c in p.coeffs().iter().rev() {
        let nr = re * u - im * v + crate::poly::big_to_f64(c);
        im = re * v + im * u;
        re = nr;
    }
    (re, im)
}

fn torus_residual_ok(c: &ParametricCurve, u: f64, v: f64) -> bool {
    c.coords().iter().all(|f| {
        let (a, b) = eval_complex(f.num(), u, v);
        let (p, q) = eval_complex(f.den(), u, v);
        let m = a.hypot(b) / p.hypot(q);
        (m - 1.0).abs() <= 1e-8
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(s: &[&str]) -> ParametricCurve {
        ParametricCurve::from_strs(s).unwrap()
    }

    #[test]
    fn log_vectors() {
        assert_eq!(log_vector(&[(1.0, 0.0), (1.0, 0.0), (1.0, 0.0)]).unwrap(), vec![0.0; 3]);
        let e = std::f64::consts::E;
        let l = log_vector(&[(e, 0.0), (e * e, 0.0)]).unwrap();
        assert!((l[0] - 1.0).abs() < 1e-15 && (l[1] - 2.0).abs() < 1e-15);
        let th = std::f64::consts::PI / 3.0;
        let l = log_vector(&[(th.cos(), th.sin()), (th.cos(), -th.sin())]).unwrap();
        assert!(l.iter().all(|x| x.abs() < 1e-15));
        assert!(log_vector(&[(0.0, 0.0)]).is_err());
    }

    #[test]
    fn line_meets_torus_twice() {
        let r = torus_points(&curve(&["t", "1 - t"]), &TorusOptions::default()).unwrap();
        assert_eq!(r.status, TorusStatus::Finite);
        assert_eq!(r.points.len(), 2);
        let s3 = 3f64.sqrt() / 2.0;
        assert!((r.points[0].t[0] - 0.5).abs() < 1e-9 && (r.points[0].t[1] + s3).abs() < 1e-9);
        assert!((r.points[1].t[1] - s3).abs() < 1e-9);
        assert_eq!(r.subdivision.agrees_with_exact, Some(true));
    }

    #[test]
    fn mobius_curve_is_infinite() {
        let c = curve(&["t", "(t - 2)/(2*t - 1)"]);
        let r = torus_points(&c, &TorusOptions::default()).unwrap();
        assert_eq!(r.status, TorusStatus::Infinite);
        let w = r.witness.unwrap();
        for x in w.x {
            assert!((x[0].hypot(x[1]) - 1.0).abs() < 1e-12);
        }
        assert!(r.subdivision.curve_like_clusters > 0);
    }

    #[test]
    fn third_coordinate_kills_points() {
        let r = torus_points(&curve(&["t", "1 - t", "t - 2"]), &TorusOptions::default()).unwrap();
        assert_eq!(r.status, TorusStatus::Finite);
        assert!(r.points.is_empty());
    }

    #[test]
    fn implicit_tests() {
        let line = BiPoly::from_terms(&[(1, 0, 1), (0, 1, 1), (0, 0, -1)]);
        assert!(infinitude_test(&line).witness.is_none());
        assert!(!infinitude_test(&line).conjugation_proportional);
        let diag = BiPoly::from_terms(&[(1, 0, 1), (0, 1, -1)]);
        assert!(infinitude_test(&diag).witness.is_some());
        let f = RatFunc::from_poly(IntPoly::x());
        let g = crate::poly::parse::parse_ratfunc("(t - 2)/(2*t - 1)").unwrap();
        let q = implicitize(&f, &g).unwrap();
        // 2 x1 x2 - x1 - x2 + 2 up to sign
        assert_eq!(q.deg_x(), 1);
        assert_eq!(q.deg_y(), 1);
        assert!(infinitude_test(&q).witness.is_some());
    }

    #[test]
    fn pair_finiteness() {
        assert_eq!(finite_pair(&curve(&["t", "1 - t", "t - 2"])).unwrap(), Some((0, 1)));
        assert!(!pair_finiteness_for_theorem(&curve(&["t", "t", "t"])).unwrap());
        assert!(!pair_finiteness_for_theorem(&curve(&["t", "(t - 2)/(2*t - 1)", "t^3"])).unwrap());
    }

    #[test]
    fn tolerance_halving_is_stable() {
        let c = curve(&["t", "1 - t"]);
        let a = torus_points(&c, &TorusOptions { tol: 1e-6, ..Default::default() }).unwrap();
        let b = torus_points(&c, &TorusOptions { tol: 5e-7, ..Default::default() }).unwrap();
        assert_eq!(a.points.len(), b.points.len());
    }
}
