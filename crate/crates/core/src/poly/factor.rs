use super::IntPoly;
use algebraics::polynomial::Polynomial;
use num_bigint::BigInt;
use num_traits::{One, Signed};

/// `content * prod(f_i ^ e_i)` with every `f_i` irreducible over Q, primitive
/// and with positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPoly, usize)>,
}

impl Factorization {
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(self.content.clone());
        for (f, e) in &self.factors {
            acc = &acc * &f.pow(*e as u32);
        }
        acc
    }

    /// Distinct irreducible factors.
    pub fn irreducibles(&self) -> impl Iterator<Item = &IntPoly> {
        self.factors.iter().map(|(f, _)| f)
    }
}

pub(crate) fn factor_ordering(a: &IntPoly, b: &IntPoly) -> std::cmp::Ordering {
    a.deg()
        .cmp(&b.deg())
        .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

impl IntPoly {
    /// Complete factorization over the rationals. Panics on the zero polynomial.
    pub fn factor(&self) -> Factorization {
        assert!(!self.is_zero(), "factor of zero polynomial");
        let content = {
            let c = self.content();
            if self.lc().is_negative() {
                -c
            } else {
                c
            }
        };
        if self.is_constant() {
            return Factorization { content, factors: Vec::new() };
        }
        let prim = self.div_scalar_exact(&content);
        if prim.deg() == 1 {
            return Factorization { content, factors: vec![(prim, 1)] };
        }
        let ap: Polynomial<BigInt> = prim.coeffs().iter().cloned().collect();
        let raw = ap.factor();
        let mut factors: Vec<(IntPoly, usize)> = raw
            .polynomial_factors
            .into_iter()
            .map(|f| (IntPoly::new(f.polynomial.into_coefficients()).primitive(), f.power))
            .collect();
        factors.sort_by(|a, b| factor_ordering(&a.0, &b.0));
        let out = Factorization { content, factors };
        debug_assert!({
            let mut probe = out.clone();
            probe.content = BigInt::one();
            probe.expand() == prim
        });
        out
    }

    /// Distinct irreducible factors of positive degree.
    pub fn irreducible_factors(&self) -> Vec<IntPoly> {
        self.factor().factors.into_iter().map(|(f, _)| f).collect()
    }

    pub fn is_irreducible(&self) -> bool {
        if self.is_constant() {
            return false;
        }
        let f = self.factor();
        f.factors.len() == 1 && f.factors[0].1 == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn x4_minus_1() {
        let f = p(&[-1, 0, 0, 0, 1]).factor();
        assert_eq!(f.content, BigInt::one());
        let fs: Vec<IntPoly> = f.irreducibles().cloned().collect();
        assert_eq!(fs, vec![p(&[-1, 1]), p(&[1, 1]), p(&[1, 0, 1])]);
    }

    #[test]
    fn golden_ratio_poly_irreducible() {
        assert!(p(&[-1, -1, 1]).is_irreducible());
    }

    #[test]
    fn content_split() {
        let f = p(&[0, 6]).factor();
        assert_eq!(f.content, BigInt::from(6));
        assert_eq!(f.factors, vec![(p(&[0, 1]), 1)]);
        let g = p(&[0, -6]).factor();
        assert_eq!(g.content, BigInt::from(-6));
        assert_eq!(g.expand(), p(&[0, -6]));
    }

    #[test]
    fn multiplicities() {
        let a = &(&p(&[-1, 1]).pow(3) * &p(&[1, 0, 1]).pow(2)) * &p(&[3]);
        let f = a.factor();
        assert_eq!(f.expand(), a);
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 3), (p(&[1, 0, 1]), 2)]);
    }
}
