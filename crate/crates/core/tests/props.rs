#[path = "../../verify/src/oracles.rs"]
mod common;

use common::*;
use divcurve_core::algnum::{height_by_places, weil_height};
use divcurve_core::curves::{divisible_points, integer_kernel, ParametricCurve};
use divcurve_core::edge_approx::LaurentPoly2;
use divcurve_core::poly::{resultant, BiPoly, Eliminate, IntPoly};
use divcurve_core::survey::{lattice_records, log_log_fit};
use divcurve_core::torus::log_vector;
use divcurve_core::AlgebraicNumber;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn small_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-20i64..=20, 1..=max_deg + 1).prop_map(|c| IntPoly::from_i64(&c))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = IntPoly> {
    small_poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_divides_exactly(a in nonzero_poly(5), b in nonzero_poly(5)) {
        let prod = &a * &b;
        prop_assert_eq!(prod.exact_div(&b), Some(a));
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(5), b in nonzero_poly(5), c in nonzero_poly(3)) {
        let (x, y) = (&a * &c, &b * &c);
        let g = x.gcd(&y);
        prop_assert!(g.divides(&x) && g.divides(&y));
        prop_assert!(g.deg() >= c.deg());
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(a in nonzero_poly(4), b in nonzero_poly(4)) {
        prop_assume!(a.deg() >= 1 && b.deg() >= 1);
        let r = resultant(&BiPoly::from_x(&a), &BiPoly::from_x(&b), Eliminate::X).unwrap();
        prop_assert_eq!(r.is_zero(), a.gcd(&b).deg() >= 1);
    }

    #[test]
    fn rational_height_formula(p in -10_000i64..=10_000, q in 1i64..=10_000) {
        prop_assume!(p != 0);
        let r = BigRational::new(p.into(), q.into());
        let x = AlgebraicNumber::rational(&r);
        let want = (r.numer().abs().max(r.denom().clone())).to_string().parse::<f64>().unwrap().ln();
        prop_assert!((weil_height(&x).unwrap() - want).abs() < 1e-12);
        prop_assert!((weil_height(&x.recip().unwrap()).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn height_routes_agree(seed in any::<u64>()) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let x = random_algebraic(&mut rng, 4);
        let (a, b) = (weil_height(&x).unwrap(), height_by_places(&x).unwrap());
        prop_assert!((a - b).abs() < 1e-8, "{} vs {} for {}", a, b, x.minpoly_string());
    }

    #[test]
    fn height_is_homogeneous(seed in any::<u64>(), k in 1i64..=5) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let x = random_algebraic(&mut rng, 3);
        let h = weil_height(&x).unwrap();
        let hk = weil_height(&x.pow(k).unwrap()).unwrap();
        prop_assert!((hk - k as f64 * h).abs() < 1e-9);
        let hi = weil_height(&x.pow(-k).unwrap()).unwrap();
        prop_assert!((hi - k as f64 * h).abs() < 1e-9);
    }

    #[test]
    fn kernel_vectors_annihilate(m in prop::collection::vec(prop::collection::vec(-4i64..=4, 4), 1..=3)) {
        let ker = integer_kernel(&m, 4);
        for v in &ker {
            for row in &m {
                prop_assert_eq!(row.iter().zip(v).map(|(a, b)| a * b).sum::<i64>(), 0);
            }
            let g = v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x));
            prop_assert_eq!(g, 1);
        }
        // rank + nullity = 4, with the rank taken over the rationals
        prop_assert_eq!(rank(&m) + ker.len(), 4);
    }

    #[test]
    fn lattice_vectors_in_range(n in 2u32..=9) {
        let c = line();
        let recs = divisible_points(&c, n).unwrap();
        for l in lattice_records(&c, n, &recs).unwrap() {
            prop_assert!(l.k.iter().all(|&k| 0 <= k && k < n as i64));
            prop_assert!(l.height <= n as i64);
            prop_assert!(l.z.iter().all(|z| (0.0..std::f64::consts::TAU).contains(&z[1])));
        }
    }

    #[test]
    fn power_law_fits_exactly(a in 0.05f64..2.0, c in 0.1f64..10.0) {
        let data: Vec<(u32, f64)> = (2..12).map(|n| (n, c * (n as f64).powf(a))).collect();
        let f = log_log_fit(&data).unwrap();
        prop_assert!((f.exponent - a).abs() < 1e-9);
        prop_assert!(f.residual < 1e-9);
    }

    #[test]
    fn log_vector_of_products(r1 in 0.01f64..100.0, r2 in 0.01f64..100.0, th in 0.0f64..std::f64::consts::TAU) {
        let l = log_vector(&[(r1 * th.cos(), r1 * th.sin()), (r2, 0.0)]).unwrap();
        prop_assert!((l[0] - r1.ln()).abs() < 1e-12 && (l[1] - r2.ln()).abs() < 1e-12);
    }

    #[test]
    fn laurent_display_parses_back(terms in prop::collection::vec((-2i64..=2, -2i64..=2, -9i64..=9), 2..=5)) {
        if let Ok(p) = LaurentPoly2::from_i64(&terms) {
            let q: LaurentPoly2 = p.to_string().parse().unwrap();
            prop_assert_eq!(p.terms(), q.terms());
        }
    }

    #[test]
    fn curve_file_round_trip(a in nonzero_poly(3), b in nonzero_poly(3)) {
        prop_assume!(a.deg() >= 1);
        let text = format!("N = 2\ncoord1 = {}\ncoord2 = ({}) / ({})\n", a, a, b);
        if let Ok(c) = ParametricCurve::parse_file(&text) {
            let again = ParametricCurve::parse_file(&c.to_file_string()).unwrap();
            prop_assert_eq!(c.to_file_string(), again.to_file_string());
        }
    }
}

/// Rank over the rationals by fraction-free elimination on BigInt.
fn rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let (f, g) = (a[r][c].clone(), a[i][c].clone());
                for k in 0..cols {
                    a[i][k] = &a[i][k] * &f - &a[r][k] * &g;
                }
            }
        }
        r += 1;
    }
    r
}
