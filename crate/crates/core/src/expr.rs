//! A small infix language for naming valuations, polynomials and area
//! measures on the command line.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | name | name '[' integer (',' integer)? ']' | '(' expr ')'
//! ```
//!
//! Names: `pi`; the polynomials `t`, `s`, `u`, `f[k]`, `p[k]`, `q[k]`;
//! the valuations `chi`, `vol`, `t_hat`, `s_hat`, `u_hat`, `mu[k,q]`; and the
//! area measures `B[k,q]`, `Gamma[k,q]`, `Delta[k,q]`, `N[k,q]`. Polynomials
//! become valuations when combined with one. `*` between valuations is the
//! product.

use std::fmt;

use num_bigint::BigInt;

use crate::areamod::{AreaKind, AreaMeasure, AreaModule};
use crate::error::{Error, Result};
use crate::poly::{fu_f, poly_p, poly_q, Coords, GradedPoly};
use crate::scalars::{PiScalar, Rational};
use crate::valalg::{ValAlgebra, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(PiScalar),
    Poly(GradedPoly),
    Val(Valuation),
    Area(AreaMeasure),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Poly(_) => "polynomial",
            Value::Val(_) => "valuation",
            Value::Area(_) => "area measure",
        }
    }

    pub fn into_scalar(self) -> Result<PiScalar> {
        match self {
            Value::Scalar(c) => Ok(c),
            Value::Poly(p) if p.terms().all(|((a, b), _)| a == 0 && b == 0) => Ok(p.coefficient(0, 0)),
            other => Err(Error::Type(format!("expected a scalar, found a {}", other.kind()))),
        }
    }

    pub fn into_poly(self) -> Result<GradedPoly> {
        match self {
            Value::Scalar(c) => Ok(GradedPoly::constant(Coords::St, c)),
            Value::Poly(p) => Ok(p),
            other => Err(Error::Type(format!("expected a polynomial, found a {}", other.kind()))),
        }
    }

    /// Scalars become multiples of `chi`; polynomials are evaluated in the algebra.
    pub fn into_val(self, n: u32) -> Result<Valuation> {
        match self {
            Value::Val(v) if v.n() == n => Ok(v),
            Value::Val(v) => Err(Error::DimensionMismatch(v.n(), n)),
            Value::Scalar(_) | Value::Poly(_) => Ok(ValAlgebra::get(n)?.from_poly(&self.into_poly()?)),
            other => Err(Error::Type(format!("expected a valuation, found an {}", other.kind()))),
        }
    }

    pub fn into_area(self) -> Result<AreaMeasure> {
        match self {
            Value::Area(m) => Ok(m),
            Value::Scalar(c) if c.is_zero() => Err(Error::Type("a bare 0 has no dimension n".into())),
            other => Err(Error::Type(format!("expected an area measure, found a {}", other.kind()))),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Scalar(c) => write!(f, "{c}"),
            Value::Poly(p) => write!(f, "{p}"),
            Value::Val(v) => write!(f, "{v}"),
            Value::Area(m) => write!(f, "{m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
    End,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|x| x.1).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Name(chars[start..i].iter().map(|x| x.1).collect())));
        } else if "+-*/^()[],".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(Error::Parse { pos, msg: format!("unexpected character {c:?}") });
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    n: Option<u32>,
    modules: Option<(std::sync::Arc<ValAlgebra>, std::sync::Arc<AreaModule>)>,
}

fn parse_err<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { pos, msg: msg.into() })
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if *self.peek() == Tok::Sym(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            parse_err(self.pos(), format!("expected '{c}'"))
        }
    }

    fn need_n(&mut self, pos: usize, what: &str) -> Result<u32> {
        let n = match self.n {
            Some(n) => n,
            None => return parse_err(pos, format!("{what} needs a dimension; pass --n")),
        };
        if self.modules.is_none() {
            self.modules = Some((ValAlgebra::get(n)?, AreaModule::get(n)?));
        }
        Ok(n)
    }

    fn val(&self) -> &ValAlgebra {
        &self.modules.as_ref().expect("need_n called first").0
    }

    fn area(&self) -> &AreaModule {
        &self.modules.as_ref().expect("need_n called first").1
    }

    fn expr(&mut self) -> Result<Value> {
        let mut acc = self.term()?;
        loop {
            let pos = self.pos();
            if self.eat('+') {
                let rhs = self.term()?;
                acc = self.add(pos, acc, rhs, false)?;
            } else if self.eat('-') {
                let rhs = self.term()?;
                acc = self.add(pos, acc, rhs, true)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Value> {
        let mut acc = self.unary()?;
        loop {
            let pos = self.pos();
            if self.eat('*') {
                let rhs = self.unary()?;
                acc = self.mul(pos, acc, rhs)?;
            } else if self.eat('/') {
                let rhs = self.unary()?;
                let c = match rhs.into_scalar() {
                    Ok(c) => c,
                    Err(_) => return parse_err(pos, "can only divide by a scalar"),
                };
                let inv = PiScalar::one().div_monomial(&c).map_err(|e| Error::Parse { pos, msg: e.to_string() })?;
                acc = self.mul(pos, acc, Value::Scalar(inv))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Value> {
        let pos = self.pos();
        if self.eat('-') {
            let v = self.unary()?;
            return self.mul(pos, Value::Scalar(PiScalar::from_int(-1)), v);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Value> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let neg = self.eat('-');
        let epos = self.pos();
        let e = match self.bump() {
            Tok::Int(i) => u32::try_from(i).or_else(|_| parse_err(epos, "exponent too large"))?,
            _ => return parse_err(epos, "expected an integer exponent"),
        };
        match base {
            Value::Scalar(c) if neg => {
                let inv = PiScalar::one().div_monomial(&c).map_err(|e| Error::Parse { pos, msg: e.to_string() })?;
                Ok(Value::Scalar(inv.pow(e)))
            }
            _ if neg => parse_err(epos, "negative exponents apply to scalars only"),
            Value::Scalar(c) => Ok(Value::Scalar(c.pow(e))),
            Value::Poly(p) => Ok(Value::Poly(p.pow(e))),
            Value::Val(v) => {
                let mut acc = self.val().chi();
                for _ in 0..e {
                    acc = self.val().product(&acc, &v)?;
                }
                Ok(Value::Val(acc))
            }
            Value::Area(_) => parse_err(pos, "cannot raise an area measure to a power"),
        }
    }

    fn index_args(&mut self, name: &str, count: usize) -> Result<Vec<i64>> {
        let pos = self.pos();
        if !self.eat('[') {
            return parse_err(pos, format!("{name} needs an index in brackets"));
        }
        let mut out = Vec::new();
        loop {
            let neg = self.eat('-');
            let ipos = self.pos();
            match self.bump() {
                Tok::Int(i) => {
                    let v = i64::try_from(i).or_else(|_| parse_err(ipos, "index too large"))?;
                    out.push(if neg { -v } else { v });
                }
                _ => return parse_err(ipos, "expected an integer index"),
            }
            if !self.eat(',') {
                break;
            }
        }
        let close = self.pos();
        self.expect(']')?;
        if out.len() != count {
            return parse_err(close, format!("{name} takes {count} index(es), found {}", out.len()));
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<Value> {
        let pos = self.pos();
        match self.bump() {
            Tok::Int(i) => Ok(Value::Scalar(PiScalar::from_rational(Rational::from_integer(i)))),
            Tok::Sym('(') => {
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Tok::Name(name) => self.named(pos, &name),
            Tok::End => parse_err(pos, "unexpected end of input"),
            Tok::Sym(c) => parse_err(pos, format!("unexpected '{c}'")),
        }
    }

    fn named(&mut self, pos: usize, name: &str) -> Result<Value> {
        let wrap = |r: Result<Value>| r.map_err(|e| Error::Parse { pos, msg: e.to_string() });
        match name {
            "pi" => Ok(Value::Scalar(PiScalar::pi())),
            "t" => Ok(Value::Poly(GradedPoly::t(Coords::St))),
            "s" => Ok(Value::Poly(GradedPoly::s())),
            "u" => Ok(Value::Poly(GradedPoly::u().convert(Coords::St))),
            "f" | "p" | "q" => {
                let k = self.index_args(name, 1)?[0];
                let k = u32::try_from(k).or_else(|_| parse_err(pos, format!("{name}[k] needs k >= 0")))?;
                let p = match name {
                    "f" if k == 0 => return parse_err(pos, "f[k] needs k >= 1"),
                    "f" => fu_f(k, Coords::St),
                    "p" => poly_p(k, Coords::St),
                    _ => poly_q(k, Coords::St),
                };
                Ok(Value::Poly(p))
            }
            "chi" | "vol" | "t_hat" | "s_hat" | "u_hat" => {
                self.need_n(pos, name)?;
                let a = self.val();
                Ok(Value::Val(match name {
                    "chi" => a.chi(),
                    "vol" => a.vol(),
                    "t_hat" => a.t_hat(),
                    "s_hat" => a.s_hat(),
                    _ => a.u_hat(),
                }))
            }
            "mu" => {
                let ix = self.index_args(name, 2)?;
                let n = self.need_n(pos, name)?;
                wrap(Valuation::mu(n, ix[0], ix[1]).map(Value::Val))
            }
            "B" | "Gamma" => {
                let ix = self.index_args(name, 2)?;
                let n = self.need_n(pos, name)?;
                let kind = if name == "B" { AreaKind::B } else { AreaKind::Gamma };
                wrap(crate::areamod::AreaIndex::new(n, kind, ix[0], ix[1])
                    .map(|i| Value::Area(AreaMeasure::basis_element(n, i))))
            }
            "Delta" | "N" => {
                let ix = self.index_args(name, 2)?;
                self.need_n(pos, name)?;
                let (k, q) = (ix[0], ix[1]);
                if k < 0 || q < 0 {
                    return parse_err(pos, format!("{name}[{k},{q}] needs nonnegative indices"));
                }
                let m = if name == "Delta" {
                    self.area().delta_measure(k as u32, q as u32)
                } else {
                    self.area().null_measure(k as u32, q as u32)
                };
                wrap(m.map(Value::Area))
            }
            _ => parse_err(pos, format!("unknown name {name:?}")),
        }
    }

    fn lift_pair(&mut self, pos: usize, a: Value, b: Value) -> Result<(Value, Value)> {
        use Value::*;
        let wrap = |e: Error| Error::Parse { pos, msg: e.to_string() };
        Ok(match (a, b) {
            (Scalar(x), Poly(p)) => (Poly(GradedPoly::constant(Coords::St, x)), Poly(p)),
            (Poly(p), Scalar(x)) => (Poly(p), Poly(GradedPoly::constant(Coords::St, x))),
            (x @ (Scalar(_) | Poly(_)), Val(v)) => {
                let n = v.n();
                (Val(x.into_val(n).map_err(wrap)?), Val(v))
            }
            (Val(v), x @ (Scalar(_) | Poly(_))) => {
                let n = v.n();
                (Val(v), Val(x.into_val(n).map_err(wrap)?))
            }
            pair => pair,
        })
    }

    fn add(&mut self, pos: usize, a: Value, b: Value, negate: bool) -> Result<Value> {
        use Value::*;
        let b = if negate { self.mul(pos, Scalar(PiScalar::from_int(-1)), b)? } else { b };
        let wrap = |e: Error| Error::Parse { pos, msg: e.to_string() };
        match self.lift_pair(pos, a, b)? {
            (Scalar(x), Scalar(y)) => Ok(Scalar(&x + &y)),
            (Poly(x), Poly(y)) => x.try_add(&y).map(Poly).map_err(wrap),
            (Val(x), Val(y)) => x.try_add(&y).map(Val).map_err(wrap),
            (Area(x), Area(y)) => x.try_add(&y).map(Area).map_err(wrap),
            (x, y) => parse_err(pos, format!("cannot add a {} and a {}", x.kind(), y.kind())),
        }
    }

    fn mul(&mut self, pos: usize, a: Value, b: Value) -> Result<Value> {
        use Value::*;
        let wrap = |e: Error| Error::Parse { pos, msg: e.to_string() };
        match (a, b) {
            (Scalar(x), Scalar(y)) => Ok(Scalar(&x * &y)),
            (Scalar(c), Poly(p)) | (Poly(p), Scalar(c)) => Ok(Poly(p.scale(&c))),
            (Scalar(c), Val(v)) | (Val(v), Scalar(c)) => Ok(Val(v.scale(&c))),
            (Scalar(c), Area(m)) | (Area(m), Scalar(c)) => Ok(Area(m.scale(&c))),
            (Poly(x), Poly(y)) => x.try_mul(&y).map(Poly).map_err(wrap),
            (a @ (Poly(_) | Val(_)), b @ (Poly(_) | Val(_))) => match self.lift_pair(pos, a, b)? {
                (Val(x), Val(y)) => {
                    if x.n() != y.n() {
                        return Err(wrap(Error::DimensionMismatch(x.n(), y.n())));
                    }
                    self.val().product(&x, &y).map(Val).map_err(wrap)
                }
                _ => unreachable!("lifted to valuations"),
            },
            (x, y) => parse_err(pos, format!("cannot multiply a {} by a {}", x.kind(), y.kind())),
        }
    }
}

/// Parses and evaluates `src`. `n` is required as soon as a valuation or
/// area measure is named.
pub fn evaluate(src: &str, n: Option<u32>) -> Result<Value> {
    let mut p = Parser { toks: tokenize(src)?, at: 0, n, modules: None };
    if n.is_some() {
        p.need_n(0, "n")?;
    }
    let v = p.expr()?;
    if *p.peek() != Tok::End {
        return parse_err(p.pos(), "unexpected trailing input");
    }
    Ok(v)
}

/// Parses a scalar such as `4/3 * pi^-1` or `1/2 - pi`.
pub fn parse_scalar(src: &str) -> Result<PiScalar> {
    evaluate(src, None)?.into_scalar()
}

pub fn parse_poly(src: &str) -> Result<GradedPoly> {
    evaluate(src, None)?.into_poly()
}

pub fn parse_val(src: &str, n: u32) -> Result<Valuation> {
    evaluate(src, Some(n))?.into_val(n)
}

pub fn parse_area(src: &str, n: u32) -> Result<AreaMeasure> {
    evaluate(src, Some(n))?.into_area()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rat;
    use proptest::prelude::*;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar("4/3 * pi^-1").unwrap(), PiScalar::monomial(rat(4, 3), -1));
        assert_eq!(parse_scalar("-2").unwrap(), PiScalar::from_int(-2));
        assert_eq!(parse_scalar("(1 + pi)^2").unwrap().to_string(), "1 + 2 * pi + pi^2");
        assert!(matches!(parse_scalar("1 / (1 + pi)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_scalar("1/0"), Err(Error::Parse { .. })));
    }

    #[test]
    fn polys() {
        assert_eq!(parse_poly("p[2]").unwrap().to_string(), "t^2 - s");
        assert_eq!(parse_poly("4*s - t^2").unwrap(), GradedPoly::u().convert(Coords::St));
        assert_eq!(parse_poly("t*t").unwrap(), parse_poly("t^2").unwrap());
    }

    #[test]
    fn valuations() {
        let a = ValAlgebra::get(2).unwrap();
        assert_eq!(parse_val("u", 2).unwrap(), a.u());
        assert_eq!(parse_val("mu[1,0]", 2).unwrap(), Valuation::mu(2, 1, 0).unwrap());
        assert_eq!(parse_val("t*t", 2).unwrap(), parse_val("t^2", 2).unwrap());
        assert_eq!(parse_val("mu[1,0] * mu[1,0]", 2).unwrap(), a.product(&a.t(), &a.t()).unwrap().scale(&PiScalar::monomial(rat(1, 4), 2)));
        assert_eq!(parse_val("1", 2).unwrap(), a.chi());
        assert!(parse_val("f[3]", 2).unwrap().is_zero());
    }

    #[test]
    fn measures() {
        let m = parse_area("2*B[3,1] - Gamma[2,1]", 2).unwrap();
        assert_eq!(m.to_string(), "-Gamma[2,1] + 2 * B[3,1]");
        assert_eq!(parse_area("Delta[3,1]", 2).unwrap(), parse_area("B[3,1]", 2).unwrap());
        assert_eq!(parse_area("N[1,0]", 2).unwrap().to_string(), "-2/3 * B[1,0] + 2/3 * Gamma[1,0]");
    }

    #[test]
    fn errors() {
        match parse_area("B[2,1]", 2) {
            Err(Error::Parse { pos: 0, msg }) => assert!(msg.contains("k - 2q - 1 >= 0"), "{msg}"),
            other => panic!("{other:?}"),
        }
        match evaluate("t + )", None) {
            Err(Error::Parse { pos: 4, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(evaluate("mu[1,0]", None), Err(Error::Parse { .. })));
        assert!(matches!(evaluate("B[1,0] + t", Some(2)), Err(Error::Parse { .. })));
        assert!(matches!(evaluate("x", None), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(evaluate("1 $", None), Err(Error::Parse { pos: 2, .. })));
    }

    proptest! {
        #[test]
        fn scalar_display_round_trips(terms in proptest::collection::vec((-4i32..=4, -20i64..=20, 1i64..=9), 0..4)) {
            let c = PiScalar::from_terms(terms.into_iter().map(|(p, a, b)| (p, rat(a, b))));
            prop_assert_eq!(parse_scalar(&c.to_string()).unwrap(), c);
        }
    }
}
