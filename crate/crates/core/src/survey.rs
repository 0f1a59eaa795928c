//! Batch survey over divisible points: fundamental-domain logarithms and
//! lattice vectors, growth tables, S-integral filtering, and a JSON report.

use crate::algnum::{is_s_integral, AlgebraicNumber};
use crate::curves::{coset_membership, divisible_points, ratfunc_disk, CosetStatus, DivisibleRecord, ParametricCurve};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::path::Path;

const ARG_BITS: [u64; 4] = [64, 128, 256, 512];
/// Decimal places used for every real in the JSON report.
pub const REAL_DIGITS: usize = 12;

/// One embedded divisible point: `x = exp(z)` with `Im z` in `[0, 2 pi)` and
/// `k = floor(n Im z / 2 pi)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeRecord {
    pub n: u32,
    pub t_minpoly: Vec<String>,
    /// Which root of `t_minpoly` gives this embedding.
    pub embedding: usize,
    /// `(Re z_i, Im z_i)` per coordinate.
    pub z: Vec<[f64; 2]>,
    pub k: Vec<i64>,
    /// Max modulus of the entries of `k`.
    pub height: i64,
}

impl LatticeRecord {
    pub fn in_range(&self) -> bool {
        self.k.iter().all(|&k| 0 <= k && k < self.n as i64) && self.height <= self.n as i64
    }
}

/// `(ln|x|, arg x in [0, 2 pi), floor(n arg / 2 pi))` with the floor certified.
fn log_and_lattice(x: &AlgebraicNumber, n: u32) -> Result<(f64, f64, i64)> {
    if x.is_zero() {
        return Err(Error::ZeroInput("logarithm of a zero coordinate"));
    }
    let nf = n as f64;
    for &bits in &ARG_BITS {
        let d = x.disk(bits);
        let (re, im) = d.center.to_f64();
        let r = d.radius.to_f64();
        let m = re.hypot(im);
        if !(r < 0.25 * m) {
            continue;
        }
        if x.is_real() {
            // positive reals sit on Im = 0
            return Ok(if re > 0.0 { (m.ln(), 0.0, 0) } else { (m.ln(), PI, (n / 2) as i64) });
        }
        let mut arg = im.atan2(re);
        if arg < 0.0 {
            arg += TAU;
        }
        let y = nf * arg / TAU;
        let err = nf * (2.0 * r / m + 4.0 * f64::EPSILON) / TAU + 4.0 * f64::EPSILON * y.abs();
        let (lo, hi) = ((y - err).floor(), (y + err).floor());
        if lo == hi {
            return Ok((m.ln(), arg, lo as i64));
        }
        // n * arg / 2 pi is an integer exactly when x^n is a positive real
        let p = x.pow(n as i64)?;
        if p.is_real() && p.approx().0 > 0.0 {
            return Ok((m.ln(), arg, y.round() as i64));
        }
    }
    Err(Error::Precision(format!("argument of {} too close to a lattice boundary", x.minpoly_string())))
}

fn point_lattice(n: u32, t: &AlgebraicNumber, point: &[AlgebraicNumber]) -> Result<LatticeRecord> {
    let mut z = Vec::with_capacity(point.len());
    let mut k = Vec::with_capacity(point.len());
    for x in point {
        let (l, a, kk) = log_and_lattice(x, n)?;
        z.push([l, a]);
        k.push(kk);
    }
    let height = k.iter().map(|v| v.abs()).max().unwrap_or(0);
    Ok(LatticeRecord { n, t_minpoly: t.minpoly().coeff_strings(), embedding: t.index(), z, k, height })
}

/// Lattice records for every complex embedding of every record's point.
/// Records sharing a parameter minimal polynomial are expanded once.
pub fn lattice_records(c: &ParametricCurve, n: u32, records: &[DivisibleRecord]) -> Result<Vec<LatticeRecord>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for rec in records {
        if !seen.insert(rec.t.minpoly().coeff_strings()) {
            continue;
        }
        for t in rec.t.conjugates() {
            let point = if t == rec.t {
                rec.point.clone()
            } else {
                c.point_at(&t)?.ok_or_else(|| Error::Degenerate("conjugate parameter hits a pole".into()))?
            };
            out.push(point_lattice(n, &t, &point)?);
        }
    }
    out.sort_by(|a, b| (&a.t_minpoly, a.embedding).cmp(&(&b.t_minpoly, b.embedding)));
    Ok(out)
}

/// Least squares fit of `ln y = a ln n + b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LogLogFit {
    pub exponent: f64,
    pub intercept: f64,
    /// Root mean square of the residuals.
    pub residual: f64,
    /// Standard error of the exponent; needs at least three samples.
    pub stderr: Option<f64>,
    pub samples: usize,
}

pub fn log_log_fit(data: &[(u32, f64)]) -> Option<LogLogFit> {
    let pts: Vec<(f64, f64)> =
        data.iter().filter(|&&(_, y)| y > 0.0).map(|&(n, y)| ((n as f64).ln(), y.ln())).collect();
    let m = pts.len();
    if m < 2 {
        return None;
    }
    let mf = m as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / mf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let a = sxy / sxx;
    let b = my - a * mx;
    let ssr: f64 = pts.iter().map(|p| (p.1 - a * p.0 - b).powi(2)).sum();
    Some(LogLogFit {
        exponent: a,
        intercept: b,
        residual: (ssr / mf).sqrt(),
        stderr: (m > 2).then(|| (ssr / (mf - 2.0) / sxx).sqrt()),
        samples: m,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeRow {
    pub n: u32,
    pub points: usize,
    pub distinct_k: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShapeTable {
    pub rows: Vec<ShapeRow>,
    pub fit: Option<LogLogFit>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeRow {
    pub n: u32,
    pub min_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeTable {
    pub rows: Vec<DegreeRow>,
    pub fit: Option<LogLogFit>,
}

fn require_not_coset(c: &ParametricCurve) -> Result<()> {
    let rep = coset_membership(c);
    if rep.status != CosetStatus::NotInProperCoset {
        return Err(Error::CurveIsCoset { status: rep.status.to_string(), relation: rep.relation });
    }
    Ok(())
}

/// Divisible points and lattice records per `n`, in ascending `n`.
type Level = (u32, Vec<DivisibleRecord>, Vec<LatticeRecord>);

fn levels(c: &ParametricCurve, n_min: u32, n_max: u32) -> Result<Vec<Level>> {
    if n_min > n_max {
        return Ok(Vec::new());
    }
    if n_min < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {}", n_min)));
    }
    require_not_coset(c)?;
    (n_min..=n_max)
        .into_par_iter()
        .map(|n| {
            let recs = divisible_points(c, n)?;
            let lat = lattice_records(c, n, &recs)?;
            Ok((n, recs, lat))
        })
        .collect()
}

fn distinct_k(lat: &[LatticeRecord]) -> usize {
    lat.iter().map(|r| &r.k).collect::<BTreeSet<_>>().len()
}

fn shape_from(levels: &[Level]) -> ShapeTable {
    let rows: Vec<ShapeRow> = levels
        .iter()
        .map(|(n, recs, lat)| ShapeRow { n: *n, points: recs.len(), distinct_k: distinct_k(lat) })
        .collect();
    let fit = log_log_fit(&rows.iter().map(|r| (r.n, r.distinct_k as f64)).collect::<Vec<_>>());
    ShapeTable { rows, fit }
}

fn degrees_from(levels: &[Level]) -> DegreeTable {
    let rows: Vec<DegreeRow> = levels
        .iter()
        .filter_map(|(n, recs, _)| recs.iter().map(|r| r.degree).min().map(|d| DegreeRow { n: *n, min_degree: d }))
        .collect();
    let fit = log_log_fit(&rows.iter().map(|r| (r.n, r.min_degree as f64)).collect::<Vec<_>>());
    DegreeTable { rows, fit }
}

/// Distinct lattice vectors per `n` with a log-log fit of the count.
pub fn pw_shape_table(c: &ParametricCurve, n_min: u32, n_max: u32) -> Result<ShapeTable> {
    Ok(shape_from(&levels(c, n_min, n_max)?))
}

/// Smallest divisible-point degree per `n`; levels without points are skipped.
pub fn degree_growth_table(c: &ParametricCurve, n_min: u32, n_max: u32) -> Result<DegreeTable> {
    Ok(degrees_from(&levels(c, n_min, n_max)?))
}

/// Records whose coordinates are S-integral for the given primes.
pub fn s_integral_filter(records: &[DivisibleRecord], primes: &[u64]) -> Vec<DivisibleRecord> {
    records.iter().filter(|r| is_s_integral(&r.point, primes).unwrap_or(false)).cloned().collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugateLogRow {
    pub n: u32,
    pub t_minpoly: Vec<String>,
    pub t_index: usize,
    pub is_torsion: bool,
    /// Max over embeddings of the Euclidean norm of the log-modulus vector.
    pub max_log_norm: f64,
    /// Non-torsion point whose embeddings all land on the unit torus.
    pub zero_flagged: bool,
}

const CONJ_BITS: u64 = 80;

/// Per record, the largest log-modulus norm over all conjugate embeddings.
pub fn conjugate_log_table(c: &ParametricCurve, records: &[DivisibleRecord]) -> Vec<ConjugateLogRow> {
    records
        .iter()
        .map(|r| {
            let max = r
                .t
                .conjugates()
                .iter()
                .filter_map(|t| {
                    let mut s = 0.0;
                    for f in c.coords() {
                        let (re, im) = ratfunc_disk(f, t, CONJ_BITS)?.center.to_f64();
                        s += re.hypot(im).ln().powi(2);
                    }
                    Some(s.sqrt())
                })
                .fold(0.0, f64::max);
            ConjugateLogRow {
                n: r.n,
                t_minpoly: r.t.minpoly().coeff_strings(),
                t_index: r.t.index(),
                is_torsion: r.is_torsion,
                max_log_norm: max,
                zero_flagged: !r.is_torsion && max < 1e-12,
            }
        })
        .collect()
}

pub fn parse_curve_file(path: &Path) -> Result<ParametricCurve> {
    ParametricCurve::read_file(path)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyConfig {
    /// Label for the curve in the report, typically its file path.
    pub curve_label: String,
    pub n_min: u32,
    pub n_max: u32,
    pub primes: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct PerN {
    pub n: u32,
    pub records: Vec<DivisibleRecord>,
    pub lattice: Vec<LatticeRecord>,
    pub s_integral: Vec<DivisibleRecord>,
}

impl PerN {
    pub fn distinct_k(&self) -> usize {
        distinct_k(&self.lattice)
    }

    pub fn max_height(&self) -> f64 {
        self.records.iter().map(|r| r.height).fold(0.0, f64::max)
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.records.iter().map(|r| r.degree).min()
    }
}

#[derive(Clone, Debug)]
pub struct SurveyReport {
    pub curve: Vec<String>,
    pub config: SurveyConfig,
    pub per_n: Vec<PerN>,
    pub b_emp: f64,
    pub shape: ShapeTable,
    pub degrees: DegreeTable,
    pub conjugate_logs: Vec<ConjugateLogRow>,
}

fn real(x: f64) -> Value {
    Value::String(format!("{:.*}", REAL_DIGITS, x))
}

fn fit_json(f: &Option<LogLogFit>) -> Value {
    match f {
        None => Value::Null,
        Some(f) => json!({
            "exponent": real(f.exponent),
            "intercept": real(f.intercept),
            "residual": real(f.residual),
            "stderr": f.stderr.map(real),
            "samples": f.samples,
        }),
    }
}

fn record_json(r: &DivisibleRecord) -> Value {
    json!({
        "t_minpoly": r.t.minpoly().coeff_strings(),
        "t_index": r.t.index(),
        "point_minpolys": r.point.iter().map(|x| x.minpoly().coeff_strings()).collect::<Vec<_>>(),
        "degree": r.degree,
        "height": real(r.height),
        "is_torsion": r.is_torsion,
    })
}

impl SurveyReport {
    pub fn to_json(&self) -> Value {
        let per_n: Vec<Value> = self
            .per_n
            .iter()
            .map(|p| {
                json!({
                    "n": p.n,
                    "divisible_count": p.records.len(),
                    "distinct_k": p.distinct_k(),
                    "max_height": real(p.max_height()),
                    "min_degree": p.min_degree(),
                    "points": p.records.iter().map(record_json).collect::<Vec<_>>(),
                    "lattice": p.lattice.iter().map(|l| json!({
                        "t_minpoly": l.t_minpoly,
                        "embedding": l.embedding,
                        "z": l.z.iter().map(|z| [real(z[0]), real(z[1])]).collect::<Vec<_>>(),
                        "k": l.k,
                        "height": l.height,
                    })).collect::<Vec<_>>(),
                    "s_integral": p.s_integral.iter().map(record_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "curve": self.curve,
            "config": {
                "curve": self.config.curve_label,
                "n_min": self.config.n_min,
                "n_max": self.config.n_max,
                "primes": self.config.primes,
                "real_digits": REAL_DIGITS,
            },
            "per_n": per_n,
            "global": {
                "b_emp": real(self.b_emp),
                "shape": {
                    "rows": self.shape.rows.iter().map(|r| json!({
                        "n": r.n, "points": r.points, "distinct_k": r.distinct_k,
                    })).collect::<Vec<_>>(),
                    "fit": fit_json(&self.shape.fit),
                },
                "degree_growth": {
                    "rows": self.degrees.rows.iter().map(|r| json!({
                        "n": r.n, "min_degree": r.min_degree,
                    })).collect::<Vec<_>>(),
                    "fit": fit_json(&self.degrees.fit),
                },
                "conjugate_logs": self.conjugate_logs.iter().map(|r| json!({
                    "n": r.n,
                    "t_minpoly": r.t_minpoly,
                    "t_index": r.t_index,
                    "is_torsion": r.is_torsion,
                    "max_log_norm": real(r.max_log_norm),
                    "zero_flagged": r.zero_flagged,
                })).collect::<Vec<_>>(),
                "notes": [
                    "growth tables are observational; the bounding constants are not effective",
                    "absence of semi-algebraic curves in the lattice set is assumed, not checked",
                ],
            },
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }
}

pub fn run_survey(c: &ParametricCurve, config: &SurveyConfig) -> Result<SurveyReport> {
    if config.n_min < 2 {
        return Err(Error::InvalidArgument(format!("n must be at least 2, got {}", config.n_min)));
    }
    let lv = levels(c, config.n_min, config.n_max)?;
    let shape = shape_from(&lv);
    let degrees = degrees_from(&lv);
    let mut conjugate_logs = Vec::new();
    let mut per_n = Vec::new();
    for (n, records, lattice) in lv {
        conjugate_logs.extend(conjugate_log_table(c, &records));
        let s_integral = s_integral_filter(&records, &config.primes);
        per_n.push(PerN { n, records, lattice, s_integral });
    }
    let b_emp = per_n.iter().map(|p| p.max_height()).fold(0.0, f64::max);
    Ok(SurveyReport {
        curve: c.coords().iter().map(|f| f.to_string()).collect(),
        config: config.clone(),
        per_n,
        b_emp,
        shape,
        degrees,
        conjugate_logs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::IntPoly;

    fn line() -> ParametricCurve {
        ParametricCurve::from_strs(&["t", "1 - t"]).unwrap()
    }

    #[test]
    fn lattice_of_sixth_roots() {
        let c = line();
        let recs = divisible_points(&c, 7).unwrap();
        let lat = lattice_records(&c, 7, &recs).unwrap();
        assert_eq!(lat.len(), 2);
        let ks: BTreeSet<Vec<i64>> = lat.iter().map(|l| l.k.clone()).collect();
        assert_eq!(ks, BTreeSet::from([vec![1, 5], vec![5, 1]]));
        for l in &lat {
            assert!(l.in_range());
            assert!(l.z.iter().all(|z| z[0].abs() < 1e-12));
        }
    }

    #[test]
    fn exp_of_z_reproduces_point() {
        let c = line();
        let recs = divisible_points(&c, 4).unwrap();
        for l in lattice_records(&c, 4, &recs).unwrap() {
            let t = AlgebraicNumber::new(&IntPoly::from_i64(&[2, -1, 1]), l.embedding).unwrap();
            let p = c.point_at(&t).unwrap().unwrap();
            for (x, z) in p.iter().zip(&l.z) {
                let (re, im) = x.approx();
                let e = z[0].exp();
                assert!((e * z[1].cos() - re).abs() < 1e-12 && (e * z[1].sin() - im).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn branch_cut_cases() {
        // positive real sits on Im = 0, negative real at pi
        assert_eq!(log_and_lattice(&AlgebraicNumber::from_int(3), 5).unwrap().2, 0);
        assert_eq!(log_and_lattice(&AlgebraicNumber::from_int(-1), 5).unwrap().2, 2);
        // i with n = 4: n arg / 2 pi = 1 exactly
        let i = AlgebraicNumber::new(&IntPoly::from_i64(&[1, 0, 1]), 1).unwrap();
        let (_, a, k) = log_and_lattice(&i, 4).unwrap();
        assert!(a > 0.0);
        assert_eq!(k, if a < PI { 1 } else { 3 });
    }

    #[test]
    fn shape_and_degree_tables() {
        let c = line();
        let s = pw_shape_table(&c, 2, 7).unwrap();
        let counts: Vec<usize> = s.rows.iter().map(|r| r.distinct_k).collect();
        assert_eq!(counts[0], 0);
        assert_eq!(*counts.last().unwrap(), 2);
        assert!(pw_shape_table(&c, 5, 4).unwrap().rows.is_empty());
        let d = degree_growth_table(&c, 2, 7).unwrap();
        assert_eq!(d.rows.last().unwrap(), &DegreeRow { n: 7, min_degree: 2 });
        assert!(d.rows.iter().all(|r| r.n >= 4));
        let coset = ParametricCurve::from_strs(&["t", "1 - t", "t^2"]).unwrap();
        assert!(matches!(pw_shape_table(&coset, 2, 3), Err(Error::CurveIsCoset { .. })));
    }

    #[test]
    fn fit_recovers_power_law() {
        let data: Vec<(u32, f64)> = (2..10).map(|n| (n, 3.0 * (n as f64).powf(0.5))).collect();
        let f = log_log_fit(&data).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-12);
        assert!(f.residual < 1e-12);
        assert!(f.stderr.unwrap() < 1e-10);
        assert!(log_log_fit(&[(2, 1.0)]).is_none());
    }

    #[test]
    fn s_integral_examples() {
        let c = line();
        let mut recs = divisible_points(&c, 7).unwrap();
        assert_eq!(s_integral_filter(&recs, &[]).len(), 2);
        let half = AlgebraicNumber::rational(&num_rational::BigRational::new(1.into(), 2.into()));
        recs[0].point = vec![half, AlgebraicNumber::from_int(3)];
        assert_eq!(s_integral_filter(&recs[..1], &[]).len(), 0);
        assert_eq!(s_integral_filter(&recs[..1], &[2]).len(), 1);
    }

    #[test]
    fn conjugate_logs() {
        let c = line();
        let recs = divisible_points(&c, 7).unwrap();
        assert!(conjugate_log_table(&c, &recs).iter().all(|r| r.max_log_norm < 1e-12 && !r.zero_flagged));
        let mut fake = recs[0].clone();
        fake.t = AlgebraicNumber::from_int(2);
        fake.point = vec![AlgebraicNumber::from_int(2), AlgebraicNumber::from_int(-1)];
        fake.is_torsion = false;
        let row = &conjugate_log_table(&c, &[fake])[0];
        assert!((row.max_log_norm - 2f64.ln()).abs() < 1e-12);
        assert!(conjugate_log_table(&c, &[]).is_empty());
    }

    #[test]
    fn survey_is_deterministic_and_refuses_cosets() {
        let c = line();
        let cfg = SurveyConfig { curve_label: "line".into(), n_min: 2, n_max: 7, primes: vec![] };
        let a = run_survey(&c, &cfg).unwrap().to_json_string();
        let b = run_survey(&c, &cfg).unwrap().to_json_string();
        assert_eq!(a, b);
        let coset = ParametricCurve::from_strs(&["t", "1 - t", "t^2"]).unwrap();
        match run_survey(&coset, &cfg) {
            Err(Error::CurveIsCoset { relation, .. }) => assert_eq!(relation, vec![2, 0, -1]),
            other => panic!("expected refusal, got {:?}", other.map(|_| ())),
        }
    }
}
