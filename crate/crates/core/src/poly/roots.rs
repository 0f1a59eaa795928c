//! Certified complex root isolation.
//!
//! Approximations come from Aberth iteration in floating dyadic arithmetic
//! started on circles read off the Newton polygon of the coefficient
//! magnitudes, so roots of wildly different size are found without overflow.
//! They are certified with the Weierstrass-correction inclusion disks
//! `|z - z_i| <= d |p(z_i)| / |a_d prod_{j != i}(z_i - z_j)|`: the union of
//! the disks holds all roots and pairwise disjoint disks hold one root each.

use super::IntPoly;
use crate::dyadic::{CDy, Disk, Dy, Round};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;

const START_PREC: u64 = 64;
const MAX_PREC: u64 = 1 << 16;
const BOUND_PREC: u64 = 64;

/// A closed disk holding exactly one root of a squarefree polynomial.
///
/// The enclosing axis-parallel box `center ± radius` is exposed through the
/// rational endpoint accessors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RootBox {
    disk: Disk,
    real: bool,
}

impl RootBox {
    pub fn new(disk: Disk, real: bool) -> Self {
        RootBox { disk, real }
    }

    pub fn disk(&self) -> &Disk {
        &self.disk
    }

    pub fn center(&self) -> &CDy {
        &self.disk.center
    }

    pub fn radius(&self) -> &Dy {
        &self.disk.radius
    }

    /// Certified to hold a real root.
    pub fn is_real(&self) -> bool {
        self.real
    }

    pub fn re_lo(&self) -> BigRational {
        self.disk.center.re.sub(&self.disk.radius).to_rational()
    }

    pub fn re_hi(&self) -> BigRational {
        self.disk.center.re.add(&self.disk.radius).to_rational()
    }

    pub fn im_lo(&self) -> BigRational {
        if self.real {
            return BigRational::zero();
        }
        self.disk.center.im.sub(&self.disk.radius).to_rational()
    }

    pub fn im_hi(&self) -> BigRational {
        if self.real {
            return BigRational::zero();
        }
        self.disk.center.im.add(&self.disk.radius).to_rational()
    }

    pub fn width(&self) -> BigRational {
        self.disk.radius.mul_pow2(1).to_rational()
    }

    /// Relative precision in bits: `-log2(radius / |center|)`, infinite for exact points.
    pub fn precision_bits(&self) -> f64 {
        let r = self.disk.rel_radius();
        if r == 0.0 {
            f64::INFINITY
        } else {
            -r.log2()
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        self.disk.center.to_f64()
    }

    /// Shrink to radius at most `target` (absolute) while keeping the root.
    pub fn refine_abs(&self, p: &IntPoly, target: &Dy) -> RootBox {
        let mut cur = self.clone();
        let mut prec = START_PREC.max(cur.disk.center.ilog2().map_or(0, |l| {
            (l - target.ilog2()).max(0) as u64 + 8
        }));
        while cur.disk.radius > *target {
            cur = cur.refine_step(p, prec);
            prec = (prec * 2).min(MAX_PREC);
        }
        cur
    }

    /// Shrink until `radius <= |center| * 2^-bits`.
    pub fn refine_rel(&self, p: &IntPoly, bits: u64) -> RootBox {
        let mut cur = self.clone();
        let mut prec = START_PREC.max(bits + 8);
        loop {
            if cur.disk.radius.is_zero() {
                return cur;
            }
            if let Some(l) = cur.disk.center.ilog2() {
                // |center| >= 2^l, so radius <= 2^(l - bits) suffices
                if cur.disk.radius.ilog2() < l - bits as i64 {
                    return cur;
                }
            }
            cur = cur.refine_step(p, prec);
            prec = (prec * 2).min(MAX_PREC);
        }
    }

    /// One refinement round at working precision `prec` (bits).
    fn refine_step(&self, p: &IntPoly, prec: u64) -> RootBox {
        if let Some(b) = newton_refine(p, self, prec) {
            return b;
        }
        // fall back to re-isolation and pick the disk inside the old one
        let boxes = isolate_squarefree_prec(p, prec);
        for b in boxes {
            if disk_inside(&b.disk, &self.disk) {
                return b;
            }
        }
        let mut p2 = prec * 2;
        while p2 <= MAX_PREC {
            for b in isolate_squarefree_prec(p, p2) {
                if disk_inside(&b.disk, &self.disk) {
                    return b;
                }
            }
            p2 *= 2;
        }
        panic!("root refinement lost its root");
    }
}

fn disk_inside(inner: &Disk, outer: &Disk) -> bool {
    // |c_in - c_out| + r_in <= r_out
    let gap = outer.radius.sub(&inner.radius);
    if gap.signum() < 0 {
        return false;
    }
    inner.center.sub(&outer.center).norm_sq() <= gap.square()
}

fn newton_refine(p: &IntPoly, b: &RootBox, prec: u64) -> Option<RootBox> {
    let dp = p.derivative();
    let deg = p.deg();
    let mut c = b.disk.center.round_rel(prec);
    for _ in 0..4 {
        let v = p.eval_cdy(&c);
        if v.is_zero() {
            break;
        }
        let dv = dp.eval_cdy(&c);
        if dv.is_zero() {
            return None;
        }
        c = c.sub(&v.div(&dv, prec + 16)).round_rel(prec);
    }
    if b.real {
        c = CDy::real(c.re.clone());
    }
    let v = p.eval_cdy(&c);
    let r = if v.is_zero() {
        Dy::zero()
    } else {
        let dv = dp.eval_cdy(&c);
        let lo = dv.abs_lower(BOUND_PREC);
        if lo.is_zero() {
            return None;
        }
        v.abs_upper(BOUND_PREC)
            .mul(&Dy::from_int(deg as u64))
            .div(&lo, BOUND_PREC, Round::Up)
    };
    let nd = Disk::new(c, r);
    if disk_inside(&nd, &b.disk) {
        Some(RootBox { disk: nd, real: b.real })
    } else {
        None
    }
}

/// `floor(log2 |a|)` plus fractional part, for nonzero `a`.
fn log2_abs(a: &BigInt) -> f64 {
    let bits = a.bits();
    let s = bits.saturating_sub(60);
    let top = (a.abs() >> s).to_f64().unwrap();
    top.log2() + s as f64
}

fn cdy_polar(log2_r: f64, angle: f64) -> CDy {
    let k = log2_r.floor();
    let f = 2f64.powf(log2_r - k);
    let e = k as i64;
    CDy::new(
        Dy::from_f64(f * angle.cos()).mul_pow2(e),
        Dy::from_f64(f * angle.sin()).mul_pow2(e),
    )
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(k, log2 |a_k|)`.
fn initial_points(p: &IntPoly) -> Vec<CDy> {
    let pts: Vec<(usize, f64)> = p
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, log2_abs(c)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (k1, l1) = hull[hull.len() - 2];
            let (k2, l2) = hull[hull.len() - 1];
            // drop the middle point when it is on or below the chord
            let cross = (k2 as f64 - k1 as f64) * (pt.1 - l1) - (l2 - l1) * (pt.0 as f64 - k1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::with_capacity(p.deg());
    for (e, w) in hull.windows(2).enumerate() {
        let (k1, l1) = w[0];
        let (k2, l2) = w[1];
        let m = k2 - k1;
        let log_r = (l1 - l2) / m as f64;
        let offset = 0.4 + 0.7 * e as f64;
        for j in 0..m {
            let ang = std::f64::consts::TAU * j as f64 / m as f64 + offset;
            out.push(cdy_polar(log_r, ang));
        }
    }
    out
}

fn horner_both(cs: &[CDy], z: &CDy, prec: u64) -> (CDy, CDy) {
    let mut v = CDy::zero();
    let mut dv = CDy::zero();
    for c in cs.iter().rev() {
        dv = dv.mul(z).add(&v).round_rel(prec);
        v = v.mul(z).add(c).round_rel(prec);
    }
    (v, dv)
}

fn small_rel(w: &CDy, z: &CDy, bits: u64) -> bool {
    match (w.ilog2(), z.ilog2()) {
        (None, _) => true,
        (Some(a), Some(b)) => a < b - bits as i64,
        (Some(_), None) => false,
    }
}

/// Aberth iteration in place; returns whether every correction became tiny.
fn aberth(cs: &[CDy], zs: &mut [CDy], prec: u64, max_iter: usize) -> bool {
    let n = zs.len();
    let mut done = vec![false; n];
    let tol = prec.saturating_sub(12).max(20);
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let z = zs[i].clone();
            let (v, dv) = horner_both(cs, &z, prec);
            if v.is_zero() {
                done[i] = true;
                continue;
            }
            if dv.is_zero() {
                zs[i] = z.add(&z.scale(&Dy::pow2(-20))).add(&CDy::new(Dy::zero(), Dy::pow2(-30)));
                all = false;
                continue;
            }
            let ratio = v.div(&dv, prec);
            let mut s = CDy::zero();
            for (j, zj) in zs.iter().enumerate() {
                if j == i {
                    continue;
                }
                let d = z.sub(zj);
                if d.is_zero() {
                    continue;
                }
                s = s.add(&d.recip(prec)).round_rel(prec);
            }
            let denom = CDy::one().sub(&ratio.mul(&s)).round_rel(prec);
            let w = if denom.is_zero() { ratio.clone() } else { ratio.div(&denom, prec) };
            zs[i] = z.sub(&w).round_rel(prec);
            if small_rel(&w, &zs[i], tol) {
                done[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return true;
        }
    }
    false
}

/// Inclusion radii, or `None` when the disks are not pairwise disjoint.
fn certify(p: &IntPoly, zs: &[CDy]) -> Option<Vec<Dy>> {
    let n = zs.len();
    let lc = Dy::from_int(p.lc().abs());
    let deg = Dy::from_int(n as u64);
    let mut radii = Vec::with_capacity(n);
    for i in 0..n {
        let v = p.eval_cdy(&zs[i]);
        if v.is_zero() {
            radii.push(Dy::zero());
            continue;
        }
        let mut den = lc.clone();
        for j in 0..n {
            if j == i {
                continue;
            }
            let d = zs[i].sub(&zs[j]).abs_lower(BOUND_PREC);
            if d.is_zero() {
                return None;
            }
            den = den.mul(&d).round(BOUND_PREC, Round::Down);
        }
        let num = v.abs_upper(BOUND_PREC).mul(&deg);
        radii.push(num.div(&den, BOUND_PREC, Round::Up));
    }
    for i in 0..n {
        for j in i + 1..n {
            let r = radii[i].add(&radii[j]);
            if zs[i].sub(&zs[j]).norm_sq() <= r.square() {
                return None;
            }
        }
    }
    Some(radii)
}

/// Mark disks that certifiably hold real roots by widening them to
/// conjugation-symmetric disks that stay disjoint from all others.
/// Returns `None` if some disk meets the real axis without a decision.
fn classify_real(disks: &[Disk]) -> Option<Vec<RootBox>> {
    let mut out = Vec::with_capacity(disks.len());
    for (i, d) in disks.iter().enumerate() {
        let meets_axis = d.center.im.abs() <= d.radius;
        if !meets_axis {
            out.push(RootBox { disk: d.clone(), real: false });
            continue;
        }
        let wide = Disk::new(
            CDy::real(d.center.re.clone()),
            d.radius.add(&d.center.im.abs()).round(BOUND_PREC, Round::Up),
        );
        let isolated = disks.iter().enumerate().all(|(j, o)| j == i || !wide.overlaps(o));
        if !isolated {
            return None;
        }
        out.push(RootBox { disk: wide, real: true });
    }
    Some(out)
}

fn cmp_boxes(a: &RootBox, b: &RootBox) -> Ordering {
    // real roots first, ascending; then by real part, then imaginary part
    match (a.real, b.real) {
        (true, false) => return Ordering::Less,
        (false, true) => return Ordering::Greater,
        _ => {}
    }
    let re_sep = {
        let d = a.disk.center.re.sub(&b.disk.center.re).abs();
        d > a.disk.radius.add(&b.disk.radius)
    };
    if re_sep || a.real {
        a.disk.center.re.cmp(&b.disk.center.re)
    } else {
        a.disk
            .center
            .im
            .cmp(&b.disk.center.im)
            .then_with(|| a.disk.center.re.cmp(&b.disk.center.re))
    }
}

fn isolate_nonzero_roots(p: &IntPoly, min_prec: u64) -> Vec<RootBox> {
    let d = p.deg();
    if d == 0 {
        return Vec::new();
    }
    if d == 1 {
        let r = BigRational::new(-p.coeff(0), p.coeff(1));
        return vec![RootBox { disk: Disk::from_rational(&r, min_prec.max(START_PREC)), real: true }];
    }
    let mut zs = initial_points(p);
    let mut prec = START_PREC.max(min_prec);
    loop {
        let cs: Vec<CDy> = p
            .coeffs()
            .iter()
            .map(|c| CDy::real(Dy::from_int(c.clone()).round(prec + 8, Round::Nearest)))
            .collect();
        aberth(&cs, &mut zs, prec, 60 + 8 * d);
        if let Some(radii) = certify(p, &zs) {
            let disks: Vec<Disk> =
                zs.iter().zip(radii).map(|(z, r)| Disk::new(z.clone(), r)).collect();
            if let Some(mut boxes) = classify_real(&disks) {
                boxes.sort_by(cmp_boxes);
                return boxes;
            }
        }
        if prec >= MAX_PREC {
            panic!("root isolation did not converge; input must be squarefree");
        }
        // Real iterates of a real polynomial stay real, so a conjugate pair
        // that coarse rounding split into two real roots would never recover.
        for (j, z) in zs.iter_mut().enumerate() {
            let ang = 0.7 + 1.3 * j as f64;
            let kick = CDy::from_f64(ang.cos(), ang.sin()).mul(z).scale(&Dy::pow2(-((prec / 2) as i64)));
            *z = z.add(&kick).round_rel(2 * prec);
        }
        prec *= 2;
    }
}

/// Isolate the roots of a squarefree polynomial with working precision at least `prec`.
pub(crate) fn isolate_squarefree_prec(p: &IntPoly, prec: u64) -> Vec<RootBox> {
    assert!(!p.is_zero(), "root isolation of the zero polynomial");
    let z = p.low_order();
    let mut out = Vec::new();
    if z > 0 {
        out.push(RootBox { disk: Disk::point(CDy::zero()), real: true });
    }
    let rest = p.shift_down(z);
    let mut others = isolate_nonzero_roots(&rest, prec);
    if z > 0 {
        // keep the zero root in its real-ascending position
        let pos = others
            .iter()
            .position(|b| !b.real || b.disk.center.re.signum() > 0)
            .unwrap_or(others.len());
        others.insert(pos, out.pop().unwrap());
    }
    others
}

/// Isolating disks for the roots of a squarefree polynomial, in canonical order
/// (real roots ascending, then non-real roots by real part and imaginary part).
pub fn isolate_squarefree(p: &IntPoly) -> Vec<RootBox> {
    isolate_squarefree_prec(p, START_PREC)
}

/// Isolating boxes of width at most `width` for the distinct roots of `a`.
pub fn isolate_roots(a: &IntPoly, width: &BigRational) -> Vec<RootBox> {
    assert!(width.is_positive(), "box width must be positive");
    let sf = a.squarefree_part();
    let half = Dy::from_rational(&(width / BigRational::from_integer(2.into())), 64, Round::Down);
    isolate_squarefree(&sf)
        .into_iter()
        .map(|b| if b.disk.radius <= half { b } else { b.refine_abs(&sf, &half) })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    fn close(b: &RootBox, re: f64, im: f64, tol: f64) -> bool {
        let (x, y) = b.to_f64();
        (x - re).abs() < tol && (y - im).abs() < tol
    }

    #[test]
    fn sqrt_two() {
        let w = BigRational::new(1.into(), 1000.into());
        let bs = isolate_roots(&p(&[-2, 0, 1]), &w);
        assert_eq!(bs.len(), 2);
        assert!(bs.iter().all(|b| b.is_real() && b.width() <= w));
        assert!(close(&bs[0], -std::f64::consts::SQRT_2, 0.0, 1e-3));
        assert!(close(&bs[1], std::f64::consts::SQRT_2, 0.0, 1e-3));
    }

    #[test]
    fn linear_and_imaginary() {
        let w = BigRational::new(1.into(), 1000.into());
        let bs = isolate_roots(&p(&[-5, 1]), &w);
        assert_eq!(bs.len(), 1);
        assert!(bs[0].disk().contains(&CDy::real(Dy::from_int(5))));
        let bi = isolate_roots(&p(&[1, 0, 1]), &w);
        assert_eq!(bi.len(), 2);
        assert!(bi.iter().all(|b| !b.is_real()));
        assert!(close(&bi[0], 0.0, -1.0, 1e-3) && close(&bi[1], 0.0, 1.0, 1e-3));
    }

    #[test]
    fn squarefree_part_taken() {
        let a = &p(&[-1, 1]).pow(3) * &p(&[2, 1]);
        let bs = isolate_roots(&a, &BigRational::new(1.into(), 100.into()));
        assert_eq!(bs.len(), 2);
    }

    #[test]
    fn zero_root_is_exact() {
        let bs = isolate_squarefree(&p(&[0, -1, 0, 1]));
        assert_eq!(bs.len(), 3);
        assert!(bs[1].disk().center.is_zero() && bs[1].disk().radius.is_zero());
    }

    #[test]
    fn cyclotomic_roots_on_circle() {
        let phi = IntPoly::cyclotomic(30);
        let bs = isolate_squarefree(&phi);
        assert_eq!(bs.len(), 8);
        for b in &bs {
            let (x, y) = b.to_f64();
            assert!(((x * x + y * y).sqrt() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn huge_dynamic_range() {
        // (X - 2^3000)(X - 1)(X + 3)
        let big = BigInt::from(1) << 3000u32;
        let a = IntPoly::new(vec![-big.clone(), BigInt::from(1)]);
        let b = &(&a * &p(&[-1, 1])) * &p(&[3, 1]);
        let bs = isolate_squarefree(&b);
        assert_eq!(bs.len(), 3);
        assert!(bs[2].disk().contains(&CDy::real(Dy::pow2(3000))));
        assert!(close(&bs[0], -3.0, 0.0, 1e-9) && close(&bs[1], 1.0, 0.0, 1e-9));
    }

    #[test]
    fn tight_conjugate_pair() {
        // X^3 + 2B X^2 + B^2 X - 4B^2 with B = 3^204: a pair -B +- 2i sqrt(B) that
        // low-precision rounding turns into two real roots
        let b = num_traits::pow(BigInt::from(3), 204);
        let f = IntPoly::new(vec![-(&b * &b) * 4, &b * &b, &b * 2, BigInt::from(1)]);
        let bs = isolate_squarefree(&f);
        assert_eq!(bs.len(), 3);
        assert_eq!(bs.iter().filter(|r| r.is_real()).count(), 1);
        let (_, im) = bs[1].to_f64();
        let want = 2.0 * crate::poly::big_to_f64(&b).sqrt();
        assert!((im.abs() - want).abs() < 1e-9 * want);
    }

    #[test]
    fn refinement_keeps_root() {
        let a = p(&[-1, -1, 1]);
        let bs = isolate_squarefree(&a);
        let r = bs[1].refine_rel(&a, 300);
        assert!(r.precision_bits() >= 300.0);
        assert!(disk_inside(r.disk(), bs[1].disk()) || r.disk() == bs[1].disk());
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(close(&r, phi, 0.0, 1e-15));
    }
}
