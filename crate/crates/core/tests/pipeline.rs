#[path = "../../verify/src/oracles.rs"]
mod common;

use common::*;
use divcurve_core::algnum::{weil_height, is_root_of_unity};
use divcurve_core::curves::{divisible_points, height_bound_report, torsion_points, ParametricCurve};
use divcurve_core::edge_approx::{certify, certify_padic, CertificateCase, LaurentPoly2};
use divcurve_core::poly::IntPoly;
use divcurve_core::survey::{run_survey, SurveyConfig};
use divcurve_core::torus::{torus_points, TorusOptions, TorusStatus};
use divcurve_core::{AlgebraicNumber, Error};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::collections::BTreeSet;
use std::path::PathBuf;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/curves").join(name)
}

#[test]
fn curve_files_round_trip() {
    for name in ["line.curve", "mobius.curve", "demo.curve", "coset.curve", "torsion_coset.curve"] {
        let c = ParametricCurve::read_file(&data(name)).unwrap();
        let again = ParametricCurve::parse_file(&c.to_file_string()).unwrap();
        assert_eq!(c.to_file_string(), again.to_file_string(), "{}", name);
    }
}

#[test]
fn malformed_curve_names_the_line() {
    match ParametricCurve::parse_file("N = 2\ncoord1 = t\ncoord2 = 1 - * t\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
        other => panic!("expected a parse error, got {:?}", other.map(|c| c.to_string())),
    }
}

/// Irreducible factors of the binomial oracle, minus the excluded `t` and `t - 1`.
fn oracle_minpolys(n: u32) -> BTreeSet<Vec<String>> {
    line_power_oracle(n)
        .irreducible_factors()
        .into_iter()
        .filter(|f| f.deg() > 1)
        .map(|f| f.coeff_strings())
        .collect()
}

#[test]
fn line_divisible_points_match_binomial_oracle() {
    let c = line();
    for n in 2..=9 {
        let recs = divisible_points(&c, n).unwrap();
        let got: BTreeSet<Vec<String>> = recs.iter().map(|r| r.t.minpoly().coeff_strings()).collect();
        assert_eq!(got, oracle_minpolys(n), "n = {}", n);
        let roots: usize = oracle_minpolys(n).iter().map(|m| m.len() - 1).sum();
        assert_eq!(recs.len(), roots, "one record per conjugate parameter at n = {}", n);
    }
}

#[test]
fn line_counts_per_level() {
    let counts: Vec<usize> = (2..=7).map(|n| divisible_points(&line(), n).unwrap().len()).collect();
    assert_eq!(counts, vec![0, 0, 2, 2, 4, 2]);
    let rep = height_bound_report(&line(), 2, 7).unwrap();
    let six = divisible_points(&line(), 6).unwrap();
    let b6 = six.iter().map(|r| r.height).fold(0.0, f64::max);
    assert!((rep.b_emp - b6).abs() < 1e-12);
    assert!(rep.b_emp > 0.0);
}

#[test]
fn torsion_points_are_the_torus_points_of_the_line() {
    let tp = torsion_points(&line(), 12).unwrap();
    let tr = torus_points(&line(), &TorusOptions::default()).unwrap();
    assert_eq!(tp.len(), tr.points.len());
    for p in &tp {
        let (re, im) = p.t.approx();
        assert!(tr.points.iter().any(|q| (q.t[0] - re).abs() < 1e-9 && (q.t[1] - im).abs() < 1e-9));
        assert_eq!(p.order, 6);
    }
}

#[test]
fn torus_statuses_from_files() {
    let mob = ParametricCurve::read_file(&data("mobius.curve")).unwrap();
    assert_eq!(torus_points(&mob, &TorusOptions::default()).unwrap().status, TorusStatus::Infinite);
    let demo = ParametricCurve::read_file(&data("demo.curve")).unwrap();
    let r = torus_points(&demo, &TorusOptions::default()).unwrap();
    assert_eq!(r.status, TorusStatus::Finite);
    assert!(r.points.is_empty());
    assert_eq!(r.subdivision.agrees_with_exact, Some(true));
}

#[test]
fn unit_circle_coordinate_gives_infinitely_many() {
    // (t, t^2): the whole unit circle of t maps into the torus
    let c = curve(&["t", "t^2"]);
    let r = torus_points(&c, &TorusOptions::default()).unwrap();
    assert_eq!(r.status, TorusStatus::Infinite);
}

#[test]
fn heights_of_known_numbers() {
    let ln2 = 2f64.ln();
    let cases: [(&[i64], f64); 4] = [
        (&[-2, 1], ln2),
        (&[-1, 2], ln2),
        (&[-2, 0, 1], ln2 / 2.0),
        (&[-1, -1, 1], ((1.0 + 5f64.sqrt()) / 2.0).ln() / 2.0),
    ];
    for (c, want) in cases {
        let p = IntPoly::from_i64(c);
        for x in AlgebraicNumber::all_roots(&p).unwrap() {
            assert!((weil_height(&x).unwrap() - want).abs() < 1e-12, "{:?}", c);
            assert!(is_root_of_unity(&x).is_none());
        }
    }
}

#[test]
fn certificates_through_the_public_api() {
    let p: LaurentPoly2 = "X + Y - 1".parse().unwrap();
    let x1 = AlgebraicNumber::rational(&BigRational::from_integer(BigInt::from(10).pow(8)));
    let x2 = AlgebraicNumber::rational(&BigRational::from_integer(1 - BigInt::from(10).pow(8)));
    let c = certify(&p, &x1, &x2).unwrap();
    assert_eq!(c.j, [1, -1]);
    assert_eq!(c.alpha, AlgebraicNumber::from_int(-1));
    assert_eq!(c.case, CertificateCase::Inequality);
    assert!(c.verify(&x1, &x2).unwrap());

    let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
    let pc = certify_padic(&p, &q(1, 7), &q(6, 7), &BigInt::from(7)).unwrap();
    assert_eq!(pc.j, [1, -1]);
    assert!(matches!(certify_padic(&p, &q(2, 1), &q(-1, 1), &BigInt::from(7)), Err(Error::HypothesisNotMet { .. })));
}

#[test]
fn survey_on_the_line() {
    let c = ParametricCurve::read_file(&data("line.curve")).unwrap();
    let cfg = SurveyConfig { curve_label: "line".into(), n_min: 2, n_max: 7, primes: vec![] };
    let r = run_survey(&c, &cfg).unwrap();
    let counts: Vec<usize> = r.per_n.iter().map(|p| p.records.len()).collect();
    assert_eq!(counts, vec![0, 0, 2, 2, 4, 2]);
    assert_eq!(r.per_n.last().unwrap().distinct_k(), 2);
    for p in &r.per_n {
        if !p.records.is_empty() {
            assert!(p.distinct_k() >= 1);
        }
        assert!(p.s_integral.len() <= p.records.len());
    }
    let v = r.to_json();
    for key in ["curve", "config", "per_n", "global"] {
        assert!(v.get(key).is_some(), "{}", key);
    }
    assert!(v["global"]["b_emp"].is_string());
    assert_eq!(v["per_n"][5]["points"][0]["t_minpoly"], serde_json::json!(["1", "-1", "1"]));
}

#[test]
fn lattice_vectors_stable_under_precision() {
    // the k vectors are integers certified at escalating precision; recomputation must agree
    let c = line();
    for n in [4, 5, 6, 7] {
        let recs = divisible_points(&c, n).unwrap();
        let a = divcurve_core::survey::lattice_records(&c, n, &recs).unwrap();
        let fresh: Vec<_> = recs
            .iter()
            .map(|r| {
                let mut r = r.clone();
                r.t = AlgebraicNumber::new(r.t.minpoly(), r.t.index()).unwrap();
                r.point = c.point_at(&r.t).unwrap().unwrap();
                r
            })
            .collect();
        for x in fresh.iter().flat_map(|r| r.point.iter()) {
            x.disk(1024);
        }
        let b = divcurve_core::survey::lattice_records(&c, n, &fresh).unwrap();
        assert_eq!(a.iter().map(|l| &l.k).collect::<Vec<_>>(), b.iter().map(|l| &l.k).collect::<Vec<_>>());
    }
}
