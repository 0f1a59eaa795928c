//! Text grammar for polynomials and rational functions.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' exponent)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Exponents are integers, optionally signed or parenthesized.

use super::{IntPoly, RatFunc};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigInt),
    Var(String, usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Neg(Box<Expr>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line: 1, column, message: message.into() }
}

/// Rebase a parse error onto a line of a larger file.
pub fn at_line(e: Error, line: usize, col_offset: usize) -> Error {
    match e {
        Error::Parse { column, message, .. } => Error::Parse {
            line,
            column: column + col_offset,
            message,
        },
        other => other,
    }
}

fn lex(s: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push((Tok::Num(text.parse().expect("digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            i += 1;
        } else {
            return Err(err(col, format!("unexpected character '{}'", c)));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat('+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat('-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat('*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.peek() == Some(&Tok::Op('/')) {
                let col = self.col();
                self.pos += 1;
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?), col);
            } else if matches!(self.peek(), Some(Tok::Ident(_)) | Some(Tok::Op('('))) {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.exponent()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i64> {
        let col = self.col();
        if self.eat('(') {
            let e = self.exponent()?;
            if !self.eat(')') {
                return Err(err(self.col(), "expected ')' after exponent"));
            }
            return Ok(e);
        }
        let neg = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let v = n
                    .to_i64()
                    .filter(|v| *v <= 100_000)
                    .ok_or_else(|| err(col, "exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(err(self.col(), "expected integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Expr::Num(n))
            }
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(Expr::Var(s, col))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.col(), "expected ')'"));
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => Err(err(col, format!("unexpected '{}'", c))),
            None => Err(err(col, "unexpected end of input")),
        }
    }
}

pub fn parse_expr(s: &str) -> Result<Expr> {
    let toks = lex(s)?;
    let mut p = Parser { toks, pos: 0, end_col: s.chars().count() + 1 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.col(), "unexpected trailing input"));
    }
    Ok(e)
}

/// Sparse multivariate Laurent polynomial with rational coefficients.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Sparse {
    pub terms: BTreeMap<Vec<i64>, BigRational>,
}

impl Sparse {
    fn constant(nv: usize, c: BigRational) -> Sparse {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nv], c);
        }
        Sparse { terms }
    }

    fn var(nv: usize, k: usize) -> Sparse {
        let mut e = vec![0; nv];
        e[k] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        Sparse { terms }
    }

    fn add(&self, o: &Sparse, sign: i32) -> Sparse {
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let c = if sign < 0 { -c } else { c.clone() };
            let v = terms.remove(e).unwrap_or_else(BigRational::zero) + c;
            if !v.is_zero() {
                terms.insert(e.clone(), v);
            }
        }
        Sparse { terms }
    }

    fn mul(&self, o: &Sparse) -> Sparse {
        let mut out = Sparse::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let mut single = Sparse::default();
                single.terms.insert(e, c1 * c2);
                out = out.add(&single, 1);
            }
        }
        out
    }
}

fn to_sparse(e: &Expr, vars: &[&str], laurent: bool) -> Result<Sparse> {
    let nv = vars.len();
    Ok(match e {
        Expr::Num(n) => Sparse::constant(nv, BigRational::from_integer(n.clone())),
        Expr::Var(s, col) => match vars.iter().position(|v| v == s) {
            Some(k) => Sparse::var(nv, k),
            None => {
                return Err(err(
                    *col,
                    format!("unknown variable '{}' (expected {})", s, vars.join(" or ")),
                ))
            }
        },
        Expr::Add(a, b) => to_sparse(a, vars, laurent)?.add(&to_sparse(b, vars, laurent)?, 1),
        Expr::Sub(a, b) => to_sparse(a, vars, laurent)?.add(&to_sparse(b, vars, laurent)?, -1),
        Expr::Mul(a, b) => to_sparse(a, vars, laurent)?.mul(&to_sparse(b, vars, laurent)?),
        Expr::Neg(a) => Sparse::default().add(&to_sparse(a, vars, laurent)?, -1),
        Expr::Div(a, b, col) => {
            let num = to_sparse(a, vars, laurent)?;
            let den = to_sparse(b, vars, laurent)?;
            let inv = invert_monomial(&den, laurent).ok_or_else(|| {
                err(*col, "division is only allowed by a nonzero constant here")
            })?;
            num.mul(&inv)
        }
        Expr::Pow(a, k) => {
            let base = to_sparse(a, vars, laurent)?;
            let b = if *k < 0 {
                invert_monomial(&base, laurent)
                    .ok_or_else(|| err(0, "negative exponent of a non-monomial"))?
            } else {
                base
            };
            let mut acc = Sparse::constant(nv, BigRational::one());
            for _ in 0..k.unsigned_abs() {
                acc = acc.mul(&b);
            }
            acc
        }
    })
}

fn invert_monomial(s: &Sparse, laurent: bool) -> Option<Sparse> {
    if s.terms.len() != 1 {
        return None;
    }
    let (e, c) = s.terms.iter().next().unwrap();
    if !laurent && e.iter().any(|&k| k != 0) {
        return None;
    }
    let mut terms = BTreeMap::new();
    terms.insert(e.iter().map(|k| -k).collect(), c.recip());
    Some(Sparse { terms })
}

const UNIVARIATE_NAMES: [&str; 4] = ["t", "X", "x", "T"];

fn single_variable(e: &Expr, found: &mut Option<(String, usize)>) -> Result<()> {
    match e {
        Expr::Var(s, col) => {
            if !UNIVARIATE_NAMES.contains(&s.as_str()) {
                return Err(err(*col, format!("unknown variable '{}' (expected t or X)", s)));
            }
            match found {
                Some((f, _)) if f != s => {
                    return Err(err(*col, format!("mixed variables '{}' and '{}'", f, s)))
                }
                _ => *found = Some((s.clone(), *col)),
            }
        }
        Expr::Num(_) => {}
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            single_variable(a, found)?;
            single_variable(b, found)?;
        }
        Expr::Neg(a) | Expr::Pow(a, _) => single_variable(a, found)?,
    }
    Ok(())
}

fn univariate_var(e: &Expr) -> Result<String> {
    let mut found = None;
    single_variable(e, &mut found)?;
    Ok(found.map_or_else(|| "t".to_string(), |f| f.0))
}

/// Parse a univariate polynomial with rational coefficients, ascending.
pub fn parse_rational_coeffs(s: &str) -> Result<Vec<BigRational>> {
    let e = parse_expr(s)?;
    let v = univariate_var(&e)?;
    let sp = to_sparse(&e, &[v.as_str()], false)?;
    let deg = sp.terms.keys().map(|k| k[0]).max().unwrap_or(0);
    if deg > 100_000 {
        return Err(err(1, "degree too large"));
    }
    let mut out = vec![BigRational::zero(); deg as usize + 1];
    for (k, c) in sp.terms {
        out[k[0] as usize] = c;
    }
    Ok(out)
}

/// Parse a univariate polynomial with integer coefficients.
pub fn parse_int_poly(s: &str) -> Result<IntPoly> {
    let coeffs = parse_rational_coeffs(s)?;
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if !c.is_integer() {
            return Err(err(1, format!("non-integer coefficient {}", c)));
        }
        out.push(c.to_integer());
    }
    Ok(IntPoly::new(out))
}

/// Parse a bivariate Laurent polynomial in the given variable names.
pub fn parse_laurent(s: &str, vars: &[&str]) -> Result<Sparse> {
    let e = parse_expr(s)?;
    to_sparse(&e, vars, true)
}

/// Parse a rational function in a single variable.
pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    let e = parse_expr(s)?;
    let v = univariate_var(&e)?;
    ratfunc_of(&e, &v)
}

fn ratfunc_of(e: &Expr, v: &str) -> Result<RatFunc> {
    Ok(match e {
        Expr::Num(n) => RatFunc::constant(&BigRational::from_integer(n.clone())),
        Expr::Var(..) => RatFunc::from_poly(IntPoly::x()),
        Expr::Add(a, b) => ratfunc_of(a, v)?.add(&ratfunc_of(b, v)?),
        Expr::Sub(a, b) => ratfunc_of(a, v)?.sub(&ratfunc_of(b, v)?),
        Expr::Mul(a, b) => ratfunc_of(a, v)?.mul(&ratfunc_of(b, v)?),
        Expr::Neg(a) => ratfunc_of(a, v)?.neg(),
        Expr::Div(a, b, col) => {
            let d = ratfunc_of(b, v)?;
            if d.is_zero() {
                return Err(err(*col, "division by zero"));
            }
            ratfunc_of(a, v)?.div(&d)
        }
        Expr::Pow(a, k) => {
            let b = ratfunc_of(a, v)?;
            if *k < 0 && b.is_zero() {
                return Err(err(1, "zero raised to a negative power"));
            }
            b.powi(*k)
        }
    })
}

/// Format a rational number compactly.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parse `a`, `-a` or `a/b`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err(1, format!("invalid rational '{}'", s)))?;
    let d: BigInt = d.parse().map_err(|_| err(1, format!("invalid rational '{}'", s)))?;
    if d.is_zero() {
        return Err(err(1, "zero denominator"));
    }
    let q = BigRational::new(n, d);
    debug_assert!(q.denom().is_positive());
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_standard_forms() {
        assert_eq!(parse_int_poly("t^2 - 3*t + 1").unwrap(), IntPoly::from_i64(&[1, -3, 1]));
        assert_eq!(parse_int_poly("X^4-1").unwrap(), IntPoly::from_i64(&[-1, 0, 0, 0, 1]));
        assert_eq!(parse_int_poly("2(t+1)^2").unwrap(), IntPoly::from_i64(&[2, 4, 2]));
        assert_eq!(parse_int_poly("-t").unwrap(), IntPoly::from_i64(&[0, -1]));
        assert_eq!(parse_int_poly("7").unwrap(), IntPoly::from_i64(&[7]));
    }

    #[test]
    fn reports_columns() {
        match parse_int_poly("t^2 + * 3") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 7),
            other => panic!("unexpected {:?}", other),
        }
        match parse_int_poly("t + y") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {:?}", other),
        }
        assert!(parse_int_poly("t/2").is_err());
        assert!(parse_int_poly("(t+1").is_err());
    }

    #[test]
    fn laurent_negative_exponents() {
        let s = parse_laurent("X^-1*Y^2 - 3 + X", &["X", "Y"]).unwrap();
        assert_eq!(s.terms.len(), 3);
        assert_eq!(s.terms[&vec![-1, 2]], BigRational::one());
        assert_eq!(s.terms[&vec![0, 0]], BigRational::from_integer((-3).into()));
    }

    #[test]
    fn rational_function() {
        let f = parse_ratfunc("(t-2)/(2*t-1)").unwrap();
        assert_eq!(f.num(), &IntPoly::from_i64(&[-2, 1]));
        assert_eq!(f.den(), &IntPoly::from_i64(&[-1, 2]));
        let g = parse_ratfunc("1/t + 1").unwrap();
        assert_eq!(g.num(), &IntPoly::from_i64(&[1, 1]));
        assert_eq!(g.den(), &IntPoly::from_i64(&[0, 1]));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }
}
