#![allow(dead_code)]

use divcurve_core::curves::ParametricCurve;
use divcurve_core::edge_approx::LaurentPoly2;
use divcurve_core::poly::{IntPoly, QPoly};
use divcurve_core::AlgebraicNumber;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn curve(coords: &[&str]) -> ParametricCurve {
    ParametricCurve::from_strs(coords).unwrap()
}

pub fn line() -> ParametricCurve {
    curve(&["t", "1 - t"])
}

/// Cyclotomic polynomials by repeated long division of `t^m - 1`, on plain
/// integer vectors (ascending).
pub fn cyclotomic_oracle(m: usize) -> Vec<i64> {
    let mut p = vec![0i64; m + 1];
    p[0] = -1;
    p[m] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            p = divide_monic(&p, &cyclotomic_oracle(d));
        }
    }
    p
}

fn divide_monic(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![0i64; a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db];
        q[k] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[k + i] -= c * bi;
        }
    }
    assert!(r.iter().all(|&c| c == 0), "inexact cyclotomic division");
    q
}

/// Whether `p` equals some cyclotomic polynomial up to sign, for orders up to 60.
pub fn is_cyclotomic_oracle(p: &IntPoly) -> bool {
    let c: Vec<i64> = p.coeffs().iter().map(|c| c.try_into().unwrap_or(i64::MAX)).collect();
    let neg: Vec<i64> = c.iter().map(|x| -x).collect();
    (1..=60).any(|m| {
        let phi = cyclotomic_oracle(m);
        phi == c || phi == neg
    })
}

/// A root of a random irreducible integer polynomial of degree at most `max_deg`.
pub fn random_algebraic(rng: &mut ChaCha8Rng, max_deg: usize) -> AlgebraicNumber {
    loop {
        let d = rng.gen_range(1..=max_deg);
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-9..=9)).collect();
        if c[d] == 0 {
            c[d] = rng.gen_range(1..=9);
        }
        if c[0] == 0 {
            c[0] = rng.gen_range(1..=9);
        }
        let p = IntPoly::from_i64(&c);
        let facs: Vec<IntPoly> = p.irreducible_factors().into_iter().filter(|f| f.deg() >= 1).collect();
        if facs.is_empty() {
            continue;
        }
        let f = &facs[rng.gen_range(0..facs.len())];
        let i = rng.gen_range(0..f.deg());
        return AlgebraicNumber::new(f, i).unwrap();
    }
}

/// A random Laurent polynomial in two variables with support in `{-1,0,1} x {-1,0,1,2}`
/// that depends on both variables.
pub fn random_laurent(rng: &mut ChaCha8Rng) -> LaurentPoly2 {
    loop {
        let k = rng.gen_range(3..=4);
        let mut terms = Vec::new();
        for _ in 0..k {
            let mut c = rng.gen_range(-3i64..=3);
            if c == 0 {
                c = 1;
            }
            terms.push((rng.gen_range(-1..=1), rng.gen_range(-1..=2), c));
        }
        let Ok(p) = LaurentPoly2::from_i64(&terms) else { continue };
        let sup = p.support();
        if sup.len() < 3 {
            continue;
        }
        let xs: std::collections::BTreeSet<i64> = sup.iter().map(|e| e[0]).collect();
        let ys: std::collections::BTreeSet<i64> = sup.iter().map(|e| e[1]).collect();
        if xs.len() > 1 && ys.len() > 1 {
            return p;
        }
    }
}

/// Points `(x1, x2)` on `P = 0` with `x1 = +-b^e` and `x2` any root of `P(x1, Y)`.
pub fn points_on(p: &LaurentPoly2, x1: &BigRational) -> Vec<(AlgebraicNumber, AlgebraicNumber)> {
    let (bi, _) = p.to_bipoly();
    let ys = bi.eval_x_rational(x1);
    let q = QPoly::new(ys);
    if q.is_zero() || q.is_constant() {
        return Vec::new();
    }
    let ip = q.to_int_primitive();
    let mut out = Vec::new();
    for f in ip.irreducible_factors() {
        if f.deg() == 0 || (f.deg() == 1 && f.coeff(0).is_zero()) {
            continue;
        }
        for y in AlgebraicNumber::all_roots(&f).unwrap() {
            out.push((AlgebraicNumber::rational(x1), y));
        }
    }
    out
}

pub fn big_power(base: i64, e: u32, negative: bool) -> BigRational {
    let mut v = BigInt::one();
    for _ in 0..e {
        v *= base;
    }
    if negative {
        v = -v;
    }
    BigRational::from_integer(v)
}

/// `1 - t^n - (1 - t)^n` by binomial expansion: vanishes at parameters whose
/// `n`-th power tuple lies on the line `x + y = 1`.
pub fn line_power_oracle(n: u32) -> IntPoly {
    let n = n as usize;
    let mut c = vec![BigInt::zero(); n + 1];
    c[0] += 1;
    c[n] -= 1;
    let mut binom = BigInt::one();
    for k in 0..=n {
        let term = if k % 2 == 0 { binom.clone() } else { -binom.clone() };
        c[k] -= term;
        binom = binom * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    IntPoly::new(c)
}
