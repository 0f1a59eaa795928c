//! Rationally parametrized curves in the algebraic torus: the curve file
//! format, coset tests, divisible points by resultant elimination, torsion
//! points up to an order bound, and empirical height tables.

use crate::algnum::{is_root_of_unity, tuple_height, AlgebraicNumber};
use crate::dyadic::Disk;
use crate::poly::parse::{at_line, fmt_rational, parse_ratfunc};
use crate::poly::{resultant, BiPoly, Eliminate, IntPoly, NumberField, QPoly, RatFunc};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt;
use std::path::Path;

/// `t -> (f_1(t), ..., f_N(t))` with rational functions `f_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricCurve {
    coords: Vec<RatFunc>,
}

impl ParametricCurve {
    /// Needs `N >= 2` nonzero coordinates, at least one of them nonconstant.
    pub fn new(coords: Vec<RatFunc>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::InvalidArgument(format!(
                "a curve needs at least 2 coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(i) = coords.iter().position(|f| f.is_zero()) {
            return Err(Error::InvalidArgument(format!("coordinate {} is identically zero", i + 1)));
        }
        if coords.iter().all(|f| f.is_constant()) {
            return Err(Error::InvalidArgument("all coordinates are constant".into()));
        }
        Ok(ParametricCurve { coords })
    }

    /// Parses each coordinate as a rational function of `t`.
    pub fn from_strs(coords: &[&str]) -> Result<Self> {
        ParametricCurve::new(coords.iter().map(|s| parse_ratfunc(s)).collect::<Result<_>>()?)
    }

    pub fn coords(&self) -> &[RatFunc] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Parses the plain-text curve format:
    ///
    /// ```text
    /// # comment
    /// N = 3
    /// coord1 = t
    /// coord2 = 1 - t
    /// coord3 = (t - 2) / (2*t - 1)
    /// ```
    pub fn parse_file(text: &str) -> Result<Self> {
        let perr = |line: usize, column: usize, message: String| Error::Parse { line, column, message };
        let mut n: Option<usize> = None;
        let mut slots: Vec<Option<RatFunc>> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = ln + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let eq = body.find('=').ok_or_else(|| perr(line, 1, "expected '<key> = <value>'".into()))?;
            let key = body[..eq].trim();
            let value = &body[eq + 1..];
            let value_col = eq + 2;
            if key == "N" {
                if n.is_some() {
                    return Err(perr(line, 1, "N given twice".into()));
                }
                let v: usize = value.trim().parse().map_err(|_| {
                    perr(line, value_col + leading_ws(value), format!("invalid dimension '{}'", value.trim()))
                })?;
                if v < 2 {
                    return Err(perr(line, value_col + leading_ws(value), "N must be at least 2".into()));
                }
                n = Some(v);
                slots = vec![None; v];
            } else if let Some(idx) = key.strip_prefix("coord") {
                let dim = n.ok_or_else(|| perr(line, 1, "coordinates must follow the 'N = ' header".into()))?;
                let i: usize = idx
                    .parse()
                    .map_err(|_| perr(line, 1, format!("invalid coordinate key '{}'", key)))?;
                if i == 0 || i > dim {
                    return Err(perr(line, 1, format!("coordinate index {} outside 1..={}", i, dim)));
                }
                if slots[i - 1].is_some() {
                    return Err(perr(line, 1, format!("coord{} given twice", i)));
                }
                let f = parse_ratfunc(value).map_err(|e| at_line(e, line, value_col - 1))?;
                if f.is_zero() {
                    return Err(perr(line, value_col, format!("coord{} is identically zero", i)));
                }
                slots[i - 1] = Some(f);
            } else {
                return Err(perr(line, 1, format!("unknown key '{}'", key)));
            }
        }
        let dim = n.ok_or_else(|| perr(1, 1, "missing 'N = ' header".into()))?;
        let mut coords = Vec::with_capacity(dim);
        for (i, s) in slots.into_iter().enumerate() {
            coords.push(s.ok_or_else(|| perr(text.lines().count().max(1), 1, format!("coord{} missing", i + 1)))?);
        }
        ParametricCurve::new(coords)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        ParametricCurve::parse_file(&text)
    }

    /// The curve in the file format accepted by [`ParametricCurve::parse_file`].
    pub fn to_file_string(&self) -> String {
        let mut s = format!("N = {}\n", self.dim());
        for (i, f) in self.coords.iter().enumerate() {
            s.push_str(&format!("coord{} = {}\n", i + 1, f.fmt_var("t")));
        }
        s
    }

    /// The point at the parameter value `t`; `None` if some coordinate has a
    /// zero or a pole there.
    pub fn point_at(&self, t: &AlgebraicNumber) -> Result<Option<Vec<AlgebraicNumber>>> {
        let mut out = Vec::with_capacity(self.dim());
        for f in &self.coords {
            match coordinate_value(f, t)? {
                Some(v) => out.push(v),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }
}

fn leading_ws(s: &str) -> usize {
    s.len() - s.trim_start().len()
}

impl fmt::Display for ParametricCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.fmt_var("t")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Enclosure of `f(t)` from an enclosure of `t`.
pub(crate) fn ratfunc_disk(f: &RatFunc, t: &AlgebraicNumber, bits: u64) -> Option<Disk> {
    let prec = bits + 32;
    let z = t.disk(bits + 16);
    let u = f.num().eval_disk(&z, prec);
    let v = f.den().eval_disk(&z, prec);
    u.div(&v, prec)
}

/// `f(t)` as an algebraic number, `None` when `t` is a zero or pole of `f`.
pub fn coordinate_value(f: &RatFunc, t: &AlgebraicNumber) -> Result<Option<AlgebraicNumber>> {
    let (u, v) = (f.num(), f.den());
    let q = t.minpoly();
    if q.divides(u) || q.divides(v) {
        return Ok(None);
    }
    if let Some(c) = f.as_constant() {
        return Ok(Some(AlgebraicNumber::rational(&c)));
    }
    if let Some(r) = t.as_rational() {
        let val = f.eval_rational(&r).expect("pole excluded");
        return Ok(Some(AlgebraicNumber::rational(&val)));
    }
    let cand = value_resultant(q, f)?;
    let (fc, tc) = (f.clone(), t.clone());
    AlgebraicNumber::from_enclosure(&cand, move |bits| ratfunc_disk(&fc, &tc, bits)).map(Some)
}

/// `Res_t(q(t), y v(t) - u(t))`: vanishes at `f(t)` for every root `t` of `q`.
fn value_resultant(q: &IntPoly, f: &RatFunc) -> Result<IntPoly> {
    let mut second = BiPoly::zero();
    for (k, c) in f.den().coeffs().iter().enumerate() {
        second = second.add(&BiPoly::term(c.clone(), k, 1));
    }
    for (k, c) in f.num().coeffs().iter().enumerate() {
        second = second.sub(&BiPoly::term(c.clone(), k, 0));
    }
    resultant(&BiPoly::from_x(q), &second, Eliminate::X)
}

/// `Res_y(m(y), u(t) - y v(t))`: its roots are the `t` with `f(t)` a
/// conjugate of the root of `m`.
fn preimage_resultant(m: &IntPoly, f: &RatFunc) -> Result<IntPoly> {
    let mut second = BiPoly::zero();
    for (k, c) in f.num().coeffs().iter().enumerate() {
        second = second.add(&BiPoly::term(c.clone(), 0, k));
    }
    for (k, c) in f.den().coeffs().iter().enumerate() {
        second = second.sub(&BiPoly::term(c.clone(), 1, k));
    }
    resultant(&BiPoly::from_x(m), &second, Eliminate::X)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CosetStatus {
    NotInProperCoset,
    Coset,
    TorsionCoset,
}

impl fmt::Display for CosetStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CosetStatus::NotInProperCoset => "not_in_proper_coset",
            CosetStatus::Coset => "coset",
            CosetStatus::TorsionCoset => "torsion_coset",
        })
    }
}

/// Multiplicative relations `prod f_i^{a_i} = c` satisfied identically.
#[derive(Clone, Debug, PartialEq)]
pub struct CosetReport {
    pub status: CosetStatus,
    /// First basis vector of the relation lattice (empty when there is none).
    pub relation: Vec<i64>,
    /// The constant value of the first relation.
    pub constant: Option<BigRational>,
    /// Echelon basis of all relations with their constants.
    pub relations: Vec<(Vec<i64>, BigRational)>,
}

impl CosetReport {
    pub fn to_json(&self) -> Value {
        json!({
            "status": self.status,
            "relation": self.relation,
            "constant": self.constant.as_ref().map(fmt_rational),
            "relations": self.relations.iter().map(|(a, c)| json!({
                "exponents": a,
                "constant": fmt_rational(c),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Integer kernel basis of `m` (rows x cols), in echelon form with primitive
/// rows whose leading entries are positive.
pub fn integer_kernel(m: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    // column operations on [m; I], tracked on BigInt
    let rows = m.len();
    let mut a: Vec<Vec<BigInt>> = (0..cols)
        .map(|c| {
            let mut col: Vec<BigInt> = m.iter().map(|r| BigInt::from(r[c])).collect();
            col.extend((0..cols).map(|k| BigInt::from((k == c) as i64)));
            col
        })
        .collect();
    let mut pivot_col = 0;
    for r in 0..rows {
        if pivot_col >= cols {
            break;
        }
        loop {
            // smallest nonzero entry in row r among the remaining columns
            let best = (pivot_col..cols)
                .filter(|&c| !a[c][r].is_zero())
                .min_by(|&x, &y| a[x][r].abs().cmp(&a[y][r].abs()));
            let Some(b) = best else { break };
            a.swap(pivot_col, b);
            let mut done = true;
            for c in pivot_col + 1..cols {
                if a[c][r].is_zero() {
                    continue;
                }
                let q = a[c][r].div_floor(&a[pivot_col][r]);
                let piv = a[pivot_col].clone();
                for (x, y) in a[c].iter_mut().zip(&piv) {
                    *x -= &q * y;
                }
                if !a[c][r].is_zero() {
                    done = false;
                }
            }
            if done {
                pivot_col += 1;
                break;
            }
        }
    }
    let mut basis: Vec<Vec<BigInt>> = a[pivot_col..].iter().map(|c| c[rows..].to_vec()).collect();
    echelon_rows(&mut basis);
    basis
        .into_iter()
        .map(|v| v.iter().map(|x| x.to_i64().expect("relation exponent fits in i64")).collect())
        .collect()
}

/// Integer row echelon form with primitive rows and positive pivots.
fn echelon_rows(b: &mut Vec<Vec<BigInt>>) {
    if b.is_empty() {
        return;
    }
    let n = b[0].len();
    let mut top = 0;
    for c in 0..n {
        if top >= b.len() {
            break;
        }
        loop {
            let best = (top..b.len())
                .filter(|&r| !b[r][c].is_zero())
                .min_by(|&x, &y| b[x][c].abs().cmp(&b[y][c].abs()));
            let Some(p) = best else { break };
            b.swap(top, p);
            let mut done = true;
            for r in top + 1..b.len() {
                if b[r][c].is_zero() {
                    continue;
                }
                let q = b[r][c].div_floor(&b[top][c]);
                let piv = b[top].clone();
                for (x, y) in b[r].iter_mut().zip(&piv) {
                    *x -= &q * y;
                }
                if !b[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                top += 1;
                break;
            }
        }
    }
    b.retain(|r| r.iter().any(|x| !x.is_zero()));
    for r in b.iter_mut() {
        let g = r.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        let lead_neg = r.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        for x in r.iter_mut() {
            *x /= &g;
            if lead_neg {
                *x = -x.clone();
            }
        }
    }
}

/// Decides whether the curve lies in a proper coset from the exponent matrix
/// of the irreducible factors of its coordinates.
pub fn coset_membership(c: &ParametricCurve) -> CosetReport {
    let mut factors: Vec<IntPoly> = Vec::new();
    let mut contents: Vec<BigRational> = Vec::new();
    let mut cols: Vec<Vec<(usize, i64)>> = Vec::new();
    for f in &c.coords {
        let mut col = Vec::new();
        let mut content = BigRational::one();
        for (p, sign) in [(f.num(), 1i64), (f.den(), -1i64)] {
            let fac = p.factor();
            content = if sign > 0 {
                content * BigRational::from_integer(fac.content.clone())
            } else {
                content / BigRational::from_integer(fac.content.clone())
            };
            for (g, m) in fac.factors {
                let idx = match factors.iter().position(|h| *h == g) {
                    Some(i) => i,
                    None => {
                        factors.push(g);
                        factors.len() - 1
                    }
                };
                col.push((idx, sign * m as i64));
            }
        }
        contents.push(content);
        cols.push(col);
    }
    let n = c.dim();
    let mut m = vec![vec![0i64; n]; factors.len()];
    for (j, col) in cols.iter().enumerate() {
        for &(i, e) in col {
            m[i][j] += e;
        }
    }
    let kernel = integer_kernel(&m, n);
    if kernel.is_empty() {
        return CosetReport {
            status: CosetStatus::NotInProperCoset,
            relation: Vec::new(),
            constant: None,
            relations: Vec::new(),
        };
    }
    let relations: Vec<(Vec<i64>, BigRational)> = kernel
        .into_iter()
        .map(|a| {
            let mut k = BigRational::one();
            for (ci, &ai) in contents.iter().zip(&a) {
                k *= rational_powi(ci, ai);
            }
            (a, k)
        })
        .collect();
    let torsion = relations.iter().all(|(_, k)| k.abs().is_one());
    CosetReport {
        status: if torsion { CosetStatus::TorsionCoset } else { CosetStatus::Coset },
        relation: relations[0].0.clone(),
        constant: Some(relations[0].1.clone()),
        relations,
    }
}

fn rational_powi(q: &BigRational, k: i64) -> BigRational {
    if k >= 0 {
        num_traits::pow(q.clone(), k as usize)
    } else {
        num_traits::pow(q.recip(), k.unsigned_abs() as usize)
    }
}

/// `prod f_i^{a_i}` as a rational function.
pub fn relation_value(c: &ParametricCurve, a: &[i64]) -> RatFunc {
    let mut acc = RatFunc::from_poly(IntPoly::one());
    for (f, &e) in c.coords.iter().zip(a) {
        if e != 0 {
            acc = acc.mul(&f.powi(e));
        }
    }
    acc
}

fn require_not_coset(c: &ParametricCurve) -> Result<()> {
    let rep = coset_membership(c);
    if rep.status != CosetStatus::NotInProperCoset {
        return Err(Error::CurveIsCoset { status: rep.status.to_string(), relation: rep.relation });
    }
    Ok(())
}

/// One divisible point: `x = C(t)` with `x^n` also on the curve.
#[derive(Clone, Debug)]
pub struct DivisibleRecord {
    pub n: u32,
    /// Parameter value; its minimal polynomial and isolating box.
    pub t: AlgebraicNumber,
    pub point: Vec<AlgebraicNumber>,
    /// Degree of the field generated by the coordinates.
    pub degree: usize,
    pub height: f64,
    pub is_torsion: bool,
}

impl DivisibleRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "t_minpoly": self.t.minpoly().coeff_strings(),
            "t_index": self.t.index(),
            "t_approx": pair(self.t.approx()),
            "point": self.point.iter().map(point_json).collect::<Vec<_>>(),
            "degree": self.degree,
            "height": self.height,
            "is_torsion": self.is_torsion,
        })
    }
}

fn pair(p: (f64, f64)) -> [f64; 2] {
    [p.0, p.1]
}

pub(crate) fn point_json(x: &AlgebraicNumber) -> Value {
    json!({
        "minpoly": x.minpoly_string(),
        "index": x.index(),
        "approx": pair(x.approx()),
    })
}

/// `u(s) v(t)^n - v(s) u(t)^n` with `s` as the first variable.
fn power_equation(f: &RatFunc, n: u32) -> BiPoly {
    let (u, v) = (f.num(), f.den());
    BiPoly::from_x(u).scale_y(&v.pow(n)).sub(&BiPoly::from_x(v).scale_y(&u.pow(n)))
}

/// Polynomial in `t` vanishing at every parameter of a divisible point,
/// from pairwise resultants eliminating `s`.
fn elimination_polynomial(eqs: &[BiPoly]) -> Result<IntPoly> {
    let n = eqs.len();
    let mut acc: Option<IntPoly> = None;
    let mut covered = vec![false; n];
    let mut pairs: Vec<(usize, usize)> = (1..n).map(|k| (0, k)).collect();
    for i in 1..n {
        for k in i + 1..n {
            pairs.push((i, k));
        }
    }
    for (i, k) in pairs {
        if covered[i] && covered[k] {
            continue;
        }
        let r = if eqs[i].deg_x() == 0 || eqs[k].deg_x() == 0 {
            // an equation free of s constrains t directly
            let g = if eqs[i].deg_x() == 0 { &eqs[i] } else { &eqs[k] };
            g.row(0)
        } else {
            resultant(&eqs[i], &eqs[k], Eliminate::X)?
        };
        if r.is_zero() {
            continue;
        }
        covered[i] = true;
        covered[k] = true;
        acc = Some(match acc {
            None => r.primitive(),
            Some(a) => a.gcd(&r),
        });
    }
    acc.ok_or_else(|| {
        Error::DegenerateElimination(
            "every pairwise resultant vanishes identically; a coordinate of x and x^n coincide structurally"
                .into(),
        )
    })
}

/// Whether the equations, specialised at a root of `q`, share a root `s`.
fn common_s_root(eqs: &[BiPoly], q: &IntPoly) -> bool {
    let k = NumberField::new(q);
    let as_field_poly =
        |g: &BiPoly| -> Vec<QPoly> { g.rows().iter().map(|r| k.embed(r)).collect() };
    let mut acc: Option<Vec<QPoly>> = None;
    for g in eqs {
        let p = as_field_poly(g);
        acc = Some(match acc {
            None => k.poly_gcd(&p, &[]),
            Some(a) => k.poly_gcd(&a, &p),
        });
        if acc.as_ref().is_some_and(|a| a.len() == 1) {
            return false;
        }
    }
    // an empty list is the zero polynomial: every s works
    acc.is_some_and(|a| a.len() != 1)
}

/// All points `x = C(t)` with `x^n = C(s)` for some `s`, every coordinate of
/// `x` in the torus. Refuses curves lying in a proper coset.
pub fn divisible_points(c: &ParametricCurve, n: u32) -> Result<Vec<DivisibleRecord>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {}", n)));
    }
    require_not_coset(c)?;
    let eqs: Vec<BiPoly> = c.coords.iter().map(|f| power_equation(f, n)).collect();
    let cand = elimination_polynomial(&eqs)?;
    if cand.is_constant() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for q in cand.irreducible_factors() {
        if c.coords.iter().any(|f| q.divides(f.num()) || q.divides(f.den())) {
            continue;
        }
        if !common_s_root(&eqs, &q) {
            continue;
        }
        let roots = AlgebraicNumber::all_roots(&q)?;
        let mut points = Vec::with_capacity(roots.len());
        for t in &roots {
            points.push(c.point_at(t)?.expect("torus membership checked"));
        }
        let mut distinct: Vec<&Vec<AlgebraicNumber>> = Vec::new();
        for p in &points {
            if !distinct.contains(&p) {
                distinct.push(p);
            }
        }
        let degree = distinct.len();
        for (t, point) in roots.into_iter().zip(points) {
            let height = tuple_height(&point)?.tuple_height;
            let is_torsion = point.iter().all(|x| is_root_of_unity(x).is_some());
            out.push(DivisibleRecord { n, t, point, degree, height, is_torsion });
        }
    }
    Ok(out)
}

/// Coordinatewise power of a point.
pub fn power_tuple(x: &[AlgebraicNumber], n: i64) -> Result<Vec<AlgebraicNumber>> {
    x.iter().map(|c| c.pow(n)).collect()
}

/// Whether some parameter value maps to `x`, decided exactly.
pub fn verify_membership(c: &ParametricCurve, x: &[AlgebraicNumber]) -> Result<bool> {
    if x.len() != c.dim() || x.iter().any(|v| v.is_zero()) {
        return Ok(false);
    }
    let mut cand: Option<IntPoly> = None;
    for (f, xi) in c.coords.iter().zip(x) {
        if let Some(k) = f.as_constant() {
            if xi.as_rational() != Some(k) {
                return Ok(false);
            }
            continue;
        }
        let r = match xi.as_rational() {
            Some(q) => {
                let num = f.num().to_qpoly().sub(&f.den().to_qpoly().scale(&q));
                num.to_int_primitive()
            }
            None => preimage_resultant(xi.minpoly(), f)?,
        };
        if r.is_zero() {
            continue;
        }
        cand = Some(match cand {
            None => r.primitive(),
            Some(a) => a.gcd(&r),
        });
    }
    let cand = cand.expect("a nonconstant coordinate exists");
    if cand.is_constant() {
        return Ok(false);
    }
    for q in cand.irreducible_factors() {
        for t in AlgebraicNumber::all_roots(&q)? {
            if let Some(p) = c.point_at(&t)? {
                if p.as_slice() == x {
                    return Ok(true);
                }
            }
        }
    }
    Ok(false)
}

/// A point of the curve whose coordinates are roots of unity.
#[derive(Clone, Debug)]
pub struct TorsionPoint {
    pub t: AlgebraicNumber,
    pub point: Vec<AlgebraicNumber>,
    /// Multiplicative order of the point (lcm of the coordinate orders).
    pub order: u64,
}

impl TorsionPoint {
    pub fn to_json(&self) -> Value {
        json!({
            "t_minpoly": self.t.minpoly().coeff_strings(),
            "t_index": self.t.index(),
            "point": self.point.iter().map(point_json).collect::<Vec<_>>(),
            "order": self.order,
        })
    }
}

/// Torsion points whose order is at most `max_order`, via
/// `gcd_i(u_i^m - v_i^m)` for each `m <= max_order`.
pub fn torsion_points(c: &ParametricCurve, max_order: u64) -> Result<Vec<TorsionPoint>> {
    if max_order < 1 {
        return Err(Error::InvalidArgument("order bound must be at least 1".into()));
    }
    let mut out: Vec<TorsionPoint> = Vec::new();
    for m in 1..=max_order {
        let e = m as u32;
        let mut g: Option<IntPoly> = None;
        let mut empty = false;
        for f in &c.coords {
            let h = &f.num().pow(e) - &f.den().pow(e);
            if h.is_zero() {
                continue;
            }
            if h.is_constant() {
                empty = true;
                break;
            }
            g = Some(match g {
                None => h.primitive(),
                Some(a) => a.gcd(&h),
            });
        }
        let Some(g) = g.filter(|_| !empty) else { continue };
        if g.is_constant() {
            continue;
        }
        for q in g.irreducible_factors() {
            if c.coords.iter().any(|f| q.divides(f.num()) || q.divides(f.den())) {
                continue;
            }
            for t in AlgebraicNumber::all_roots(&q)? {
                let Some(point) = c.point_at(&t)? else { continue };
                if out.iter().any(|p| p.point == point) {
                    continue;
                }
                let mut order = 1u64;
                let mut all = true;
                for x in &point {
                    match is_root_of_unity(x) {
                        Some(k) => order = order.lcm(&k),
                        None => all = false,
                    }
                }
                if all && order <= max_order {
                    out.push(TorsionPoint { t, point, order });
                }
            }
        }
    }
    out.sort_by_key(|p| p.order);
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct HeightRow {
    pub n: u32,
    pub count: usize,
    pub degrees: Vec<usize>,
    pub max_height: f64,
    pub torsion_count: usize,
}

/// Largest height among divisible points for `n` in a range, with per-`n` rows.
#[derive(Clone, Debug, Serialize)]
pub struct HeightBoundReport {
    pub n_min: u32,
    pub n_max: u32,
    pub b_emp: f64,
    pub rows: Vec<HeightRow>,
}

pub fn height_bound_report(c: &ParametricCurve, n_min: u32, n_max: u32) -> Result<HeightBoundReport> {
    if n_min < 2 || n_max < n_min {
        return Err(Error::InvalidArgument(format!("invalid range {}..={}", n_min, n_max)));
    }
    require_not_coset(c)?;
    let rows = (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let recs = divisible_points(c, n)?;
            Ok(HeightRow {
                n,
                count: recs.len(),
                degrees: recs.iter().map(|r| r.degree).collect(),
                max_height: recs.iter().map(|r| r.height).fold(0.0, f64::max),
                torsion_count: recs.iter().filter(|r| r.is_torsion).count(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let b_emp = rows.iter().map(|r| r.max_height).fold(0.0, f64::max);
    Ok(HeightBoundReport { n_min, n_max, b_emp, rows })
}

/// The curve formed by two coordinates (0-based indices).
pub fn project(c: &ParametricCurve, i: usize, j: usize) -> Result<ParametricCurve> {
    if i == j || i >= c.dim() || j >= c.dim() {
        return Err(Error::InvalidArgument(format!(
            "projection needs two distinct indices below {}, got ({}, {})",
            c.dim(),
            i,
            j
        )));
    }
    ParametricCurve::new(vec![c.coords[i].clone(), c.coords[j].clone()])
}

#[derive(Clone, Debug, Serialize)]
pub struct BogomolovReport {
    /// Smallest height over the non-torsion sample points.
    pub floor: Option<f64>,
    /// Height per sample entry; `None` where the entry was excluded.
    pub heights: Vec<Option<f64>>,
    pub torsion_excluded: Vec<usize>,
    /// Parameters at a zero or pole of some coordinate.
    pub off_torus_excluded: Vec<usize>,
}

/// Smallest observed height over points at the given parameter values.
pub fn bogomolov_floor(c: &ParametricCurve, params: &[AlgebraicNumber]) -> Result<BogomolovReport> {
    let rep = coset_membership(c);
    if rep.status == CosetStatus::TorsionCoset {
        return Err(Error::CurveIsCoset { status: rep.status.to_string(), relation: rep.relation });
    }
    let mut heights = Vec::new();
    let mut torsion_excluded = Vec::new();
    let mut off_torus_excluded = Vec::new();
    for (k, t) in params.iter().enumerate() {
        let Some(p) = c.point_at(t)? else {
            off_torus_excluded.push(k);
            heights.push(None);
            continue;
        };
        if p.iter().all(|x| is_root_of_unity(x).is_some()) {
            torsion_excluded.push(k);
            heights.push(None);
            continue;
        }
        heights.push(Some(tuple_height(&p)?.tuple_height));
    }
    let floor = heights.iter().flatten().cloned().reduce(f64::min);
    Ok(BogomolovReport { floor, heights, torsion_excluded, off_torus_excluded })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(s: &[&str]) -> ParametricCurve {
        ParametricCurve::from_strs(s).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sixth_roots() -> Vec<AlgebraicNumber> {
        AlgebraicNumber::all_roots(&IntPoly::from_i64(&[1, -1, 1])).unwrap()
    }

    #[test]
    fn parses_curve_file() {
        let c = ParametricCurve::parse_file("# demo\nN = 3\ncoord1 = t\ncoord2 = 1 - t  # line\ncoord3 = (t-2)/(2*t-1)\n")
            .unwrap();
        assert_eq!(c.dim(), 3);
        assert_eq!(c.coords()[2].fmt_var("t"), "(t - 2) / (2*t - 1)");
        let back = ParametricCurve::parse_file(&c.to_file_string()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn curve_file_errors_carry_positions() {
        match ParametricCurve::parse_file("N = 2\ncoord1 = t\ncoord2 = 1 - * t\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {:?}", other),
        }
        assert!(matches!(ParametricCurve::parse_file("coord1 = t"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(ParametricCurve::parse_file("N = 2\ncoord1 = t\n"), Err(Error::Parse { .. })));
        assert!(matches!(ParametricCurve::parse_file("N = 2\ncoord3 = t\n"), Err(Error::Parse { line: 2, .. })));
        assert!(ParametricCurve::parse_file("N = 2\ncoord1 = 2\ncoord2 = 3\n").is_err());
    }

    #[test]
    fn coset_examples() {
        let r = coset_membership(&curve(&["t", "1 - t", "t^2"]));
        assert_eq!(r.status, CosetStatus::TorsionCoset);
        assert_eq!(r.relation, vec![2, 0, -1]);
        assert_eq!(r.constant, Some(q(1, 1)));
        let c = curve(&["t", "1 - t", "4*t^2"]);
        let r = coset_membership(&c);
        assert_eq!(r.status, CosetStatus::Coset);
        assert_eq!(r.relation, vec![2, 0, -1]);
        assert_eq!(r.constant, Some(q(1, 4)));
        assert_eq!(relation_value(&c, &r.relation).as_constant(), Some(q(1, 4)));
        let r = coset_membership(&curve(&["t", "1 - t", "t - 2"]));
        assert_eq!(r.status, CosetStatus::NotInProperCoset);
        assert!(r.relation.is_empty());
    }

    #[test]
    fn coset_with_constant_and_sign() {
        let r = coset_membership(&curve(&["t", "-1"]));
        assert_eq!(r.status, CosetStatus::TorsionCoset);
        assert_eq!(r.relation, vec![0, 1]);
        let r = coset_membership(&curve(&["t", "-t^3/2"]));
        assert_eq!(r.relation, vec![3, -1]);
        assert_eq!(r.constant, Some(q(-2, 1)));
        assert_eq!(r.status, CosetStatus::Coset);
    }

    #[test]
    fn kernel_rank_two() {
        let k = integer_kernel(&[vec![1, 1, 1, 1]], 4);
        assert_eq!(k.len(), 3);
        for v in &k {
            assert_eq!(v.iter().sum::<i64>(), 0);
        }
        assert!(integer_kernel(&[vec![1, 0], vec![0, 1]], 2).is_empty());
    }

    #[test]
    fn line_small_n() {
        let c = curve(&["t", "1 - t"]);
        assert!(divisible_points(&c, 2).unwrap().is_empty());
        assert!(divisible_points(&c, 3).unwrap().is_empty());
    }

    #[test]
    fn line_n7() {
        let c = curve(&["t", "1 - t"]);
        let recs = divisible_points(&c, 7).unwrap();
        let sixth: Vec<_> = recs.iter().filter(|r| r.t.minpoly() == &IntPoly::from_i64(&[1, -1, 1])).collect();
        assert_eq!(sixth.len(), 2);
        for r in &sixth {
            assert!(r.is_torsion);
            assert!(r.height.abs() < 1e-9);
            assert_eq!(r.degree, 2);
            assert!(verify_membership(&c, &r.point).unwrap());
            assert!(verify_membership(&c, &power_tuple(&r.point, 7).unwrap()).unwrap());
        }
    }

    #[test]
    fn line_n4_has_nontorsion_points() {
        // 1 - t^4 - (1-t)^4 = -2 t (t-1) (t^2 - t + 2)
        let c = curve(&["t", "1 - t"]);
        let recs = divisible_points(&c, 4).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[0].t.minpoly(), &IntPoly::from_i64(&[2, -1, 1]));
        assert!(!recs[0].is_torsion);
        for r in &recs {
            assert!(verify_membership(&c, &power_tuple(&r.point, 4).unwrap()).unwrap());
        }
    }

    #[test]
    fn coset_curves_are_refused() {
        let c = curve(&["t", "1 - t", "t^2"]);
        assert!(matches!(divisible_points(&c, 2), Err(Error::CurveIsCoset { .. })));
        assert!(matches!(height_bound_report(&c, 2, 3), Err(Error::CurveIsCoset { .. })));
    }

    #[test]
    fn membership() {
        let c = curve(&["t", "1 - t"]);
        let a = AlgebraicNumber::rational(&q(1, 3));
        let b = AlgebraicNumber::rational(&q(2, 3));
        assert!(verify_membership(&c, &[a.clone(), b]).unwrap());
        assert!(!verify_membership(&c, &[a.clone(), a]).unwrap());
        let r = sixth_roots();
        assert!(verify_membership(&c, &[r[1].clone(), r[0].clone()]).unwrap());
        assert!(!verify_membership(&c, &[r[0].clone(), r[0].clone()]).unwrap());
    }

    #[test]
    fn torsion_on_line() {
        let c = curve(&["t", "1 - t"]);
        let pts = torsion_points(&c, 6).unwrap();
        assert_eq!(pts.len(), 2);
        assert!(pts.iter().all(|p| p.order == 6));
        assert!(torsion_points(&c, 5).unwrap().is_empty());
        assert!(torsion_points(&curve(&["t", "1 - t", "t - 2"]), 6).unwrap().is_empty());
    }

    #[test]
    fn projections() {
        let c = curve(&["t", "1 - t", "t - 2"]);
        assert_eq!(project(&c, 0, 1).unwrap(), curve(&["t", "1 - t"]));
        assert_eq!(project(&c, 0, 2).unwrap(), curve(&["t", "t - 2"]));
        assert_eq!(project(&c, 1, 2).unwrap(), curve(&["1 - t", "t - 2"]));
        assert!(project(&c, 1, 1).is_err());
    }

    #[test]
    fn bogomolov_samples() {
        let c = curve(&["t", "1 - t"]);
        let r = sixth_roots();
        let sample = vec![AlgebraicNumber::from_int(2), AlgebraicNumber::rational(&q(1, 3)), r[0].clone()];
        let rep = bogomolov_floor(&c, &sample).unwrap();
        assert!((rep.heights[0].unwrap() - 2f64.ln()).abs() < 1e-12);
        assert!((rep.heights[1].unwrap() - 3f64.ln()).abs() < 1e-12);
        assert_eq!(rep.torsion_excluded, vec![2]);
        assert!((rep.floor.unwrap() - 2f64.ln()).abs() < 1e-12);
    }
}
