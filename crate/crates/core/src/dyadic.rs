//! Dyadic numbers `m * 2^e` with directed rounding, complex dyadics, and
//! complex disks used as certified enclosures.
//!
//! Every rounding operation takes an explicit [`Round`] mode so that upper
//! and lower bounds stay sound. Precision arguments are relative: the number
//! of significant bits kept in the mantissa.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
    Nearest,
}

/// `mantissa * 2^exp`, normalized so that the mantissa is odd (or zero with exponent 0).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dy {
    m: BigInt,
    e: i64,
}

fn shr_round(m: &BigInt, s: u64, mode: Round) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    let d = BigInt::one() << s;
    match mode {
        Round::Down => m.div_floor(&d),
        Round::Up => -((-m).div_floor(&d)),
        Round::Nearest => (m + (&d >> 1u32)).div_floor(&d),
    }
}

fn div_round(a: &BigInt, b: &BigInt, mode: Round) -> BigInt {
    match mode {
        Round::Down => a.div_floor(b),
        Round::Up => -((-a).div_floor(b)),
        Round::Nearest => {
            let two = BigInt::from(2);
            (a * &two + b).div_floor(&(b * two))
        }
    }
}

fn ldexp(x: f64, k: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let k = k.clamp(-4000, 4000) as i32;
    let h = k / 2;
    x * 2f64.powi(h) * 2f64.powi(k - h)
}

impl Dy {
    pub fn new(m: BigInt, e: i64) -> Self {
        let mut d = Dy { m, e };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.m.is_zero() {
            self.e = 0;
            return;
        }
        let tz = self.m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.m >>= tz;
            self.e += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dy { m: BigInt::zero(), e: 0 }
    }

    pub fn one() -> Self {
        Dy { m: BigInt::one(), e: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dy::new(v.into(), 0)
    }

    pub fn pow2(k: i64) -> Self {
        Dy { m: BigInt::one(), e: k }
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64");
        if x == 0.0 {
            return Dy::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        Dy::new(BigInt::from(mant) * sign, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.m.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Dy {
        Dy { m: self.m.abs(), e: self.e }
    }

    pub fn neg(&self) -> Dy {
        Dy { m: -&self.m, e: self.e }
    }

    /// Number of bits of the mantissa.
    pub fn bits(&self) -> u64 {
        self.m.bits()
    }

    /// floor(log2|x|) for nonzero x.
    pub fn ilog2(&self) -> i64 {
        self.m.bits() as i64 - 1 + self.e
    }

    pub fn add(&self, o: &Dy) -> Dy {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &o.m << (o.e - e) as u64;
        Dy::new(a + b, e)
    }

    pub fn sub(&self, o: &Dy) -> Dy {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Dy) -> Dy {
        if self.is_zero() || o.is_zero() {
            return Dy::zero();
        }
        Dy { m: &self.m * &o.m, e: self.e + o.e }
    }

    pub fn mul_pow2(&self, k: i64) -> Dy {
        if self.is_zero() {
            return Dy::zero();
        }
        Dy { m: self.m.clone(), e: self.e + k }
    }

    pub fn square(&self) -> Dy {
        self.mul(self)
    }

    /// Keep at most `prec` significant bits.
    pub fn round(&self, prec: u64, mode: Round) -> Dy {
        let b = self.m.bits();
        if b <= prec {
            return self.clone();
        }
        let s = b - prec;
        Dy::new(shr_round(&self.m, s, mode), self.e + s as i64)
    }

    /// Round to an absolute grid `2^-bits`.
    pub fn round_abs(&self, bits: i64, mode: Round) -> Dy {
        if self.e >= -bits {
            return self.clone();
        }
        let s = (-bits - self.e) as u64;
        Dy::new(shr_round(&self.m, s, mode), -bits)
    }

    /// `self / o` to `prec` significant bits.
    pub fn div(&self, o: &Dy, prec: u64, mode: Round) -> Dy {
        assert!(!o.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dy::zero();
        }
        let k = (prec as i64 + o.m.bits() as i64 - self.m.bits() as i64 + 2).max(0) as u64;
        let q = div_round(&(&self.m << k), &o.m, mode);
        Dy::new(q, self.e - o.e - k as i64)
    }

    pub fn from_rational(q: &BigRational, prec: u64, mode: Round) -> Dy {
        Dy::from_int(q.numer().clone()).div(&Dy::from_int(q.denom().clone()), prec, mode)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as u64)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as u64)
        }
    }

    /// Square root to `prec` bits; `self` must be nonnegative.
    pub fn sqrt(&self, prec: u64, mode: Round) -> Dy {
        assert!(self.signum() >= 0, "sqrt of negative dyadic");
        if self.is_zero() {
            return Dy::zero();
        }
        let mut s = (2 * prec as i64 - self.m.bits() as i64 + 2).max(0);
        if (self.e - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let big = &self.m << s as u64;
        let mut r = big.sqrt();
        let exact = &r * &r == big;
        if !exact {
            match mode {
                Round::Up => r += 1,
                Round::Nearest => {
                    let r1 = &r + 1;
                    // compare big with (r + 1/2)^2 = r^2 + r + 1/4
                    if &big * 4 > (&r * &r + &r) * 4 + 1 {
                        r = r1;
                    }
                }
                Round::Down => {}
            }
        }
        Dy::new(r, (self.e - s) / 2)
    }

    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let b = self.m.bits();
        if b <= 60 {
            return ldexp(self.m.to_i64().unwrap() as f64, self.e);
        }
        let s = b - 60;
        let top = (&self.m >> s).to_i64().unwrap();
        ldexp(top as f64, self.e + s as i64)
    }

    /// Natural log of |x|, valid beyond the f64 exponent range.
    pub fn ln_abs(&self) -> f64 {
        assert!(!self.is_zero(), "log of zero");
        let b = self.m.bits();
        let s = b.saturating_sub(60);
        let top = (self.m.abs() >> s).to_f64().unwrap();
        top.ln() + (self.e + s as i64) as f64 * std::f64::consts::LN_2
    }

    pub fn min(a: &Dy, b: &Dy) -> Dy {
        if a <= b {
            a.clone()
        } else {
            b.clone()
        }
    }

    pub fn max(a: &Dy, b: &Dy) -> Dy {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl PartialOrd for Dy {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dy {
    fn cmp(&self, o: &Self) -> Ordering {
        let sa = self.signum();
        let sb = o.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let e = self.e.min(o.e);
        let a = &self.m << (self.e - e) as u64;
        let b = &o.m << (o.e - e) as u64;
        a.cmp(&b)
    }
}

impl fmt::Debug for Dy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.to_f64())
    }
}

impl fmt::Display for Dy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

/// Complex dyadic number.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CDy {
    pub re: Dy,
    pub im: Dy,
}

impl CDy {
    pub fn new(re: Dy, im: Dy) -> Self {
        CDy { re, im }
    }

    pub fn zero() -> Self {
        CDy::new(Dy::zero(), Dy::zero())
    }

    pub fn one() -> Self {
        CDy::new(Dy::one(), Dy::zero())
    }

    pub fn real(re: Dy) -> Self {
        CDy::new(re, Dy::zero())
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        CDy::new(Dy::from_f64(re), Dy::from_f64(im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &CDy) -> CDy {
        CDy::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &CDy) -> CDy {
        CDy::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> CDy {
        CDy::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> CDy {
        CDy::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &CDy) -> CDy {
        CDy::new(
            self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        )
    }

    pub fn scale(&self, k: &Dy) -> CDy {
        CDy::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn mul_int(&self, k: &BigInt) -> CDy {
        self.scale(&Dy::from_int(k.clone()))
    }

    /// Exact |z|^2.
    pub fn norm_sq(&self) -> Dy {
        self.re.square().add(&self.im.square())
    }

    pub fn round(&self, prec: u64, mode: Round) -> CDy {
        CDy::new(self.re.round(prec, mode), self.im.round(prec, mode))
    }

    /// Approximate quotient, each component rounded to `prec` bits.
    pub fn div(&self, o: &CDy, prec: u64) -> CDy {
        let n = o.norm_sq();
        let num = self.mul(&o.conj());
        CDy::new(
            num.re.div(&n, prec, Round::Nearest),
            num.im.div(&n, prec, Round::Nearest),
        )
    }

    pub fn recip(&self, prec: u64) -> CDy {
        CDy::one().div(self, prec)
    }

    pub fn abs_upper(&self, prec: u64) -> Dy {
        self.norm_sq().sqrt(prec, Round::Up)
    }

    pub fn abs_lower(&self, prec: u64) -> Dy {
        self.norm_sq().sqrt(prec, Round::Down)
    }

    /// `|re| + |im|`, a cheap upper bound of the modulus.
    pub fn l1(&self) -> Dy {
        self.re.abs().add(&self.im.abs())
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Largest binary exponent among the components, or `None` for zero.
    pub fn ilog2(&self) -> Option<i64> {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => None,
            (false, true) => Some(self.re.ilog2()),
            (true, false) => Some(self.im.ilog2()),
            (false, false) => Some(self.re.ilog2().max(self.im.ilog2())),
        }
    }

    /// Round both components on a common grid `2^(ilog2 - prec)`.
    pub fn round_rel(&self, prec: u64) -> CDy {
        match self.ilog2() {
            None => CDy::zero(),
            Some(l) => {
                let bits = prec as i64 - l;
                CDy::new(
                    self.re.round_abs(bits, Round::Nearest),
                    self.im.round_abs(bits, Round::Nearest),
                )
            }
        }
    }
}

impl fmt::Debug for CDy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.to_f64();
        write!(f, "({:e}{:+e}i)", a, b)
    }
}

/// Closed complex disk `|z - center| <= radius`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Disk {
    pub center: CDy,
    pub radius: Dy,
}

const RAD_PREC: u64 = 40;

impl Disk {
    pub fn new(center: CDy, radius: Dy) -> Self {
        debug_assert!(radius.signum() >= 0);
        Disk { center, radius }
    }

    pub fn point(center: CDy) -> Self {
        Disk { center, radius: Dy::zero() }
    }

    pub fn from_rational(q: &BigRational, prec: u64) -> Self {
        let c = Dy::from_rational(q, prec, Round::Nearest);
        let err = (c.to_rational() - q).abs();
        let r = Dy::from_rational(&err, RAD_PREC, Round::Up);
        Disk::new(CDy::real(c), r)
    }

    pub fn is_exact(&self) -> bool {
        self.radius.is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.center.norm_sq() <= self.radius.square()
    }

    pub fn contains(&self, z: &CDy) -> bool {
        self.center.sub(z).norm_sq() <= self.radius.square()
    }

    pub fn overlaps(&self, o: &Disk) -> bool {
        let d2 = self.center.sub(&o.center).norm_sq();
        let r = self.radius.add(&o.radius);
        d2 <= r.square()
    }

    pub fn abs_upper(&self) -> Dy {
        self.center.abs_upper(RAD_PREC).add(&self.radius).round(RAD_PREC, Round::Up)
    }

    /// Lower bound for |z| over the disk, clamped at zero.
    pub fn abs_lower(&self) -> Dy {
        let v = self.center.abs_lower(RAD_PREC).sub(&self.radius);
        if v.signum() <= 0 {
            Dy::zero()
        } else {
            v.round(RAD_PREC, Round::Down)
        }
    }

    /// Round the center to `prec` significant bits, absorbing the error into the radius.
    pub fn round(&self, prec: u64) -> Disk {
        let c = self.center.round_rel(prec);
        if c == self.center {
            return self.clone();
        }
        let err = c.sub(&self.center).l1();
        Disk::new(c, self.radius.add(&err).round(RAD_PREC, Round::Up))
    }

    pub fn add(&self, o: &Disk) -> Disk {
        Disk::new(
            self.center.add(&o.center),
            self.radius.add(&o.radius).round(RAD_PREC, Round::Up),
        )
    }

    pub fn sub(&self, o: &Disk) -> Disk {
        Disk::new(
            self.center.sub(&o.center),
            self.radius.add(&o.radius).round(RAD_PREC, Round::Up),
        )
    }

    pub fn neg(&self) -> Disk {
        Disk::new(self.center.neg(), self.radius.clone())
    }

    pub fn mul(&self, o: &Disk) -> Disk {
        let c = self.center.mul(&o.center);
        let r = if self.is_exact() && o.is_exact() {
            Dy::zero()
        } else {
            self.center
                .abs_upper(RAD_PREC)
                .mul(&o.radius)
                .add(&o.center.abs_upper(RAD_PREC).mul(&self.radius))
                .add(&self.radius.mul(&o.radius))
                .round(RAD_PREC, Round::Up)
        };
        Disk::new(c, r)
    }

    pub fn scale_int(&self, k: &BigInt) -> Disk {
        let kd = Dy::from_int(k.clone());
        Disk::new(self.center.scale(&kd), self.radius.mul(&kd.abs()))
    }

    /// Enclosure of `1/z`; `None` when the disk contains zero.
    pub fn recip(&self, prec: u64) -> Option<Disk> {
        if self.contains_zero() {
            return None;
        }
        let w = self.center.recip(prec + 8);
        // |w - 1/c| = |w c - 1| / |c|
        let c_lo = self.center.abs_lower(RAD_PREC);
        if c_lo.is_zero() {
            return None;
        }
        let werr = w.mul(&self.center).sub(&CDy::one()).abs_upper(RAD_PREC).div(
            &c_lo,
            RAD_PREC,
            Round::Up,
        );
        let r = if self.radius.is_zero() {
            Dy::zero()
        } else {
            let gap = c_lo.sub(&self.radius);
            if gap.signum() <= 0 {
                return None;
            }
            self.radius
                .div(&c_lo.mul(&gap).round(RAD_PREC, Round::Down), RAD_PREC, Round::Up)
        };
        Some(Disk::new(w, r.add(&werr).round(RAD_PREC, Round::Up)))
    }

    pub fn div(&self, o: &Disk, prec: u64) -> Option<Disk> {
        Some(self.mul(&o.recip(prec)?).round(prec))
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, n: i64, prec: u64) -> Option<Disk> {
        if n < 0 {
            return self.powi(-n, prec)?.recip(prec);
        }
        let mut base = self.clone();
        let mut acc = Disk::point(CDy::one());
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).round(prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).round(prec);
            }
        }
        Some(acc)
    }

    /// Interval enclosing `ln|z|`; `None` when the disk contains zero.
    pub fn ln_abs_bounds(&self) -> Option<(f64, f64)> {
        let lo = self.abs_lower();
        if lo.is_zero() {
            return None;
        }
        let hi = self.abs_upper();
        Some((lo.ln_abs() - 1e-15, hi.ln_abs() + 1e-15))
    }

    /// Relative radius `radius / |center|` as a float (infinite when the center is 0).
    pub fn rel_radius(&self) -> f64 {
        if self.radius.is_zero() {
            return 0.0;
        }
        let c = self.center.abs_lower(RAD_PREC);
        if c.is_zero() {
            return f64::INFINITY;
        }
        (self.radius.ln_abs() - c.ln_abs()).exp()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        self.center.to_f64()
    }
}

impl fmt::Debug for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "D({:?}, {:?})", self.center, self.radius)
    }
}
