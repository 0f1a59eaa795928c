use super::IntPoly;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// Reduced quotient of integer polynomials.
///
/// `gcd(num, den) = 1` as polynomials, the combined content of `num` and `den`
/// is 1, and `den` has positive leading coefficient. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: IntPoly,
    den: IntPoly,
}

impl RatFunc {
    /// Normalize `num / den`; panics if `den` is zero.
    pub fn new(num: IntPoly, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: IntPoly::one() };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g).expect("gcd divides"), den.exact_div(&g).expect("gcd divides"))
        };
        let mut c = num.content().gcd(&den.content());
        if den.lc().is_negative() {
            c = -c;
        }
        if !c.is_one() {
            num = num.div_scalar_exact(&c);
            den = den.div_scalar_exact(&c);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RatFunc { num: p, den: IntPoly::one() }
    }

    pub fn constant(q: &BigRational) -> Self {
        RatFunc::new(IntPoly::constant(q.numer().clone()), IntPoly::constant(q.denom().clone()))
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        if self.is_constant() {
            Some(BigRational::new(self.num.coeff(0), self.den.coeff(0)))
        } else {
            None
        }
    }

    /// max(deg num, deg den).
    pub fn degree(&self) -> usize {
        self.num.deg().max(self.den.deg())
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(
            &(&self.num * &o.den) + &(&o.num * &self.den),
            &self.den * &o.den,
        )
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }

    /// Panics on division by zero.
    pub fn div(&self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }

    pub fn powi(&self, k: i64) -> RatFunc {
        let e = k.unsigned_abs() as u32;
        if k >= 0 {
            RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
        } else {
            RatFunc::new(self.den.pow(e), self.num.pow(e))
        }
    }

    /// Value at a rational point, `None` at a pole.
    pub fn eval_rational(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval_rational(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval_rational(x) / d)
        }
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.den.is_one() {
            self.num.fmt_var(var)
        } else {
            format!("({}) / ({})", self.num.fmt_var(var), self.den.fmt_var(var))
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({})", self.fmt_var("t"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn normalizes() {
        // (2t^2 - 2) / (-4t + 4) = -(t + 1)/2
        let f = RatFunc::new(p(&[-2, 0, 2]), p(&[4, -4]));
        assert_eq!(f.num(), &p(&[-1, -1]));
        assert_eq!(f.den(), &p(&[2]));
        assert!(f.den().lc() > num_bigint::BigInt::zero());
    }

    #[test]
    fn arithmetic_roundtrip() {
        let f = RatFunc::new(p(&[-2, 1]), p(&[-1, 2]));
        let g = RatFunc::from_poly(p(&[0, 1]));
        let h = f.mul(&g).div(&g);
        assert_eq!(h, f);
        assert!(f.sub(&f).is_zero());
        assert_eq!(f.powi(-1).powi(-1), f);
    }

    #[test]
    fn constants() {
        let q = BigRational::new(1.into(), 4.into());
        let c = RatFunc::constant(&q);
        assert_eq!(c.as_constant(), Some(q));
        let t = RatFunc::from_poly(p(&[0, 1]));
        let rel = t.powi(2).mul(&RatFunc::from_poly(p(&[0, 0, 4])).powi(-1));
        assert_eq!(rel.as_constant(), Some(BigRational::new(1.into(), 4.into())));
    }
}
