//! Integer helpers: factorization, valuations, Euler's totient.

use crate::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Prime factorization of `|n|` as `(prime, exponent)` pairs in ascending order.
pub fn factor_integer(n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
    if n.is_zero() {
        return Err(Error::ZeroInput("integer factorization"));
    }
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p = 2u32;
    while p < 1000 && !m.is_one() {
        let bp = BigInt::from(p);
        let mut e = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            e += 1;
        }
        if e > 0 {
            out.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !m.is_one() {
        let (found, rest) = num_prime::nt_funcs::factors(m.to_biguint().unwrap(), None);
        if let Some(r) = rest {
            if !r.is_empty() {
                return Err(Error::IntegerFactorization(n.to_string()));
            }
        }
        for (q, e) in found {
            out.push((BigInt::from(q), e as u32));
        }
        out.sort();
    }
    Ok(out)
}

/// Largest `k` with `p^k | n`; `n` must be nonzero.
pub fn valuation(n: &BigInt, p: &BigInt) -> u64 {
    debug_assert!(!n.is_zero());
    let mut m = n.clone();
    let mut k = 0;
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return k;
        }
        m = q;
        k += 1;
    }
}

pub fn totient(m: u64) -> u64 {
    let mut n = m;
    let mut out = m;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            out -= out / p;
        }
        p += 1;
    }
    if n > 1 {
        out -= out / n;
    }
    out
}

/// Whether `|n|` is a product of primes from `primes` (1 counts).
pub fn supported_on(n: &BigInt, primes: &[u64]) -> bool {
    let mut m = n.abs();
    for &p in primes {
        if p < 2 {
            continue;
        }
        let bp = BigInt::from(p);
        while (&m % &bp).is_zero() {
            m /= &bp;
        }
    }
    m.is_one()
}

pub fn is_prime_u64(p: u64) -> bool {
    num_prime::nt_funcs::is_prime64(p)
}

/// `ln |n|` for huge integers.
pub fn ln_abs_int(n: &BigInt) -> f64 {
    let bits = n.bits();
    let s = bits.saturating_sub(60);
    let top: BigUint = n.magnitude() >> s;
    top.to_f64().unwrap().ln() + s as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factors_small_and_large() {
        let f = factor_integer(&BigInt::from(-360)).unwrap();
        let expect: Vec<(BigInt, u32)> =
            vec![(2.into(), 3), (3.into(), 2), (5.into(), 1)];
        assert_eq!(f, expect);
        let big = BigInt::from(1_000_003u64) * BigInt::from(998_244_353u64);
        let g = factor_integer(&big).unwrap();
        assert_eq!(g, vec![(1_000_003.into(), 1), (998_244_353.into(), 1)]);
        assert!(factor_integer(&BigInt::zero()).is_err());
    }

    #[test]
    fn totients() {
        let v: Vec<u64> = (1..=12).map(totient).collect();
        assert_eq!(v, vec![1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]);
    }

    #[test]
    fn support() {
        assert!(supported_on(&BigInt::from(12), &[2, 3]));
        assert!(!supported_on(&BigInt::from(12), &[2]));
        assert!(supported_on(&BigInt::from(-1), &[]));
        assert_eq!(valuation(&BigInt::from(48), &BigInt::from(2)), 4);
    }
}
