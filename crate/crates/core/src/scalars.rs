//! Exact coefficients: rationals and rational Laurent polynomials in a formal `pi`.
//!
//! `pi` is treated as a transcendental, so [`PiScalar`] is the ring
//! `Q[pi, 1/pi]`. Every ball volume `omega_m` is a single term of this ring,
//! which is why no square root of `pi` is ever needed.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn factorial(m: u64) -> BigInt {
    (1..=m).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Element of `Q[pi, 1/pi]`, stored sparsely by `pi` exponent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PiScalar {
    terms: BTreeMap<i32, Rational>,
}

impl PiScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn pi() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::monomial(q, 0)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_rational(int(v))
    }

    pub fn frac(num: i64, den: i64) -> Self {
        Self::from_rational(rat(num, den))
    }

    /// `q * pi^power`.
    pub fn monomial(q: Rational, power: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert(power, q);
        }
        Self { terms }
    }

    pub fn pi_pow(power: i32) -> Self {
        Self::monomial(Rational::one(), power)
    }

    /// Builds a scalar from arbitrary `(power, coefficient)` pairs, merging
    /// repeated powers and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (i32, Rational)>>(it: I) -> Self {
        let mut out = Self::zero();
        for (p, q) in it {
            out.add_term(p, q);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &Rational)> + '_ {
        self.terms.iter().map(|(p, q)| (*p, q))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|q| q.is_one())
    }

    /// Returns `(power, coefficient)` when the scalar is a single nonzero term.
    pub fn as_monomial(&self) -> Option<(i32, &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(p, q)| (*p, q))
        } else {
            None
        }
    }

    /// Returns the rational value when no `pi` occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&0).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, power: i32) -> Rational {
        self.terms.get(&power).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, power: i32, q: Rational) {
        if q.is_zero() {
            return;
        }
        let slot = self.terms.entry(power).or_insert_with(Rational::zero);
        *slot += q;
        if slot.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(p, c)| (*p, c * q)).collect(),
        }
    }

    /// Multiplies by `pi^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(p, c)| (p + shift, c.clone())).collect(),
        }
    }

    /// Exact division by a single-term divisor `q * pi^j`.
    pub fn div_monomial(&self, divisor: &PiScalar) -> Result<PiScalar> {
        let (power, q) = divisor.as_monomial().ok_or_else(|| {
            if divisor.is_zero() {
                Error::DivisionByZero
            } else {
                Error::NonMonomialDivisor(divisor.to_string())
            }
        })?;
        let inv = q.recip();
        Ok(Self {
            terms: self.terms.iter().map(|(p, c)| (p - power, c * &inv)).collect(),
        })
    }

    /// Exact division in `Q[pi, 1/pi]`. Fails when the divisor is zero or
    /// does not divide `self` in this ring.
    pub fn div_exact(&self, divisor: &PiScalar) -> Result<PiScalar> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if divisor.as_monomial().is_some() {
            return self.div_monomial(divisor);
        }
        if self.is_zero() {
            return Ok(PiScalar::zero());
        }
        // shift both to ordinary polynomials with nonzero constant term
        let dmin = *divisor.terms.keys().next().unwrap();
        let amin = *self.terms.keys().next().unwrap();
        let d: BTreeMap<i32, Rational> =
            divisor.terms.iter().map(|(p, q)| (p - dmin, q.clone())).collect();
        let mut rem: BTreeMap<i32, Rational> =
            self.terms.iter().map(|(p, q)| (p - amin, q.clone())).collect();
        let (&ddeg, dlead) = d.iter().next_back().unwrap();
        let mut quot = PiScalar::zero();
        while let Some((&rdeg, rlead)) = rem.iter().next_back() {
            if rdeg < ddeg {
                return Err(Error::NotDivisible(self.to_string(), divisor.to_string()));
            }
            let c = rlead / dlead;
            let shift = rdeg - ddeg;
            for (p, q) in &d {
                let slot = rem.entry(p + shift).or_insert_with(Rational::zero);
                *slot -= &c * q;
                if slot.is_zero() {
                    rem.remove(&(p + shift));
                }
            }
            quot.add_term(shift, c);
        }
        Ok(quot.shift(amin - dmin))
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

/// Volume of the `m`-dimensional euclidean unit ball,
/// `pi^(m/2) / Gamma(m/2 + 1)`, in closed form.
pub fn omega(m: u32) -> PiScalar {
    let p = m / 2;
    if m.is_multiple_of(2) {
        PiScalar::monomial(Rational::new(BigInt::one(), factorial(p as u64)), p as i32)
    } else {
        // pi^p * 2^(2p+1) p! / (2p+1)!
        let num = (BigInt::one() << (2 * p + 1)) * factorial(p as u64);
        let den = factorial(2 * p as u64 + 1);
        PiScalar::monomial(Rational::new(num, den), p as i32)
    }
}

impl Add for &PiScalar {
    type Output = PiScalar;
    fn add(self, rhs: &PiScalar) -> PiScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for PiScalar {
    type Output = PiScalar;
    fn add(mut self, rhs: PiScalar) -> PiScalar {
        self += &rhs;
        self
    }
}

impl AddAssign<&PiScalar> for PiScalar {
    fn add_assign(&mut self, rhs: &PiScalar) {
        for (p, q) in &rhs.terms {
            self.add_term(*p, q.clone());
        }
    }
}

impl SubAssign<&PiScalar> for PiScalar {
    fn sub_assign(&mut self, rhs: &PiScalar) {
        for (p, q) in &rhs.terms {
            self.add_term(*p, -q.clone());
        }
    }
}

impl Sub for &PiScalar {
    type Output = PiScalar;
    fn sub(self, rhs: &PiScalar) -> PiScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for PiScalar {
    type Output = PiScalar;
    fn sub(mut self, rhs: PiScalar) -> PiScalar {
        self -= &rhs;
        self
    }
}

impl Neg for &PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        PiScalar {
            terms: self.terms.iter().map(|(p, q)| (*p, -q.clone())).collect(),
        }
    }
}

impl Neg for PiScalar {
    type Output = PiScalar;
    fn neg(self) -> PiScalar {
        -&self
    }
}

impl Mul for &PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: &PiScalar) -> PiScalar {
        let mut out = PiScalar::zero();
        for (pa, qa) in &self.terms {
            for (pb, qb) in &rhs.terms {
                out.add_term(pa + pb, qa * qb);
            }
        }
        out
    }
}

impl Mul for PiScalar {
    type Output = PiScalar;
    fn mul(self, rhs: PiScalar) -> PiScalar {
        &self * &rhs
    }
}

impl From<Rational> for PiScalar {
    fn from(q: Rational) -> Self {
        Self::from_rational(q)
    }
}

impl From<i64> for PiScalar {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Formats one term with a nonnegative coefficient as `a/b * pi^j`.
fn fmt_abs_term(power: i32, q: &Rational) -> String {
    let q = q.abs();
    match power {
        0 => fmt_rational(&q),
        1 if q.is_one() => "pi".to_string(),
        1 => format!("{} * pi", fmt_rational(&q)),
        _ if q.is_one() => format!("pi^{power}"),
        _ => format!("{} * pi^{power}", fmt_rational(&q)),
    }
}

impl fmt::Display for PiScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (p, q)) in self.terms.iter().enumerate() {
            let neg = q.is_negative();
            match (i, neg) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                (_, false) => write!(f, " + ")?,
                (_, true) => write!(f, " - ")?,
            }
            write!(f, "{}", fmt_abs_term(*p, q))?;
        }
        Ok(())
    }
}

/// Formats `sum c_i * label_i`. An empty label stands for a constant term.
/// Single-term coefficients carry their sign into the joining operator;
/// longer ones are parenthesized.
pub fn format_combination<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a PiScalar, String)>,
{
    let mut out = String::new();
    for (i, (c, label)) in terms.into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (neg, body) = match c.as_monomial() {
            Some((p, q)) => {
                let abs = fmt_abs_term(p, q);
                let body = if label.is_empty() {
                    abs
                } else if p == 0 && q.abs().is_one() {
                    label
                } else {
                    format!("{abs} * {label}")
                };
                (q.is_negative(), body)
            }
            None if label.is_empty() => (false, format!("({c})")),
            None => (false, format!("({c}) * {label}")),
        };
        match (i == 0 || out.is_empty(), neg) {
            (true, false) => {}
            (true, true) => out.push('-'),
            (false, false) => out.push_str(" + "),
            (false, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// One `{pi_power, num, den}` entry of the JSON rendering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarTerm {
    pub den: JsonInt,
    pub num: JsonInt,
    pub pi_power: i32,
}

/// Integer that serializes as a JSON number when it is exactly representable
/// as an IEEE double, and as a decimal string otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

const SAFE_JSON_INT: i64 = 1 << 53;

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.abs() < SAFE_JSON_INT => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Raw::Str(s) => s
                .parse::<BigInt>()
                .map(JsonInt)
                .map_err(|e| de::Error::custom(format!("bad integer {s:?}: {e}"))),
        }
    }
}

impl PiScalar {
    pub fn to_json_terms(&self) -> Vec<ScalarTerm> {
        self.terms
            .iter()
            .map(|(p, q)| ScalarTerm {
                den: JsonInt(q.denom().clone()),
                num: JsonInt(q.numer().clone()),
                pi_power: *p,
            })
            .collect()
    }

    pub fn from_json_terms(terms: &[ScalarTerm]) -> Result<Self> {
        let mut out = PiScalar::zero();
        for t in terms {
            if t.den.0.is_zero() {
                return Err(Error::DivisionByZero);
            }
            out.add_term(t.pi_power, Rational::new(t.num.0.clone(), t.den.0.clone()));
        }
        Ok(out)
    }
}

impl Serialize for PiScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<ScalarTerm>::deserialize(d)?;
        PiScalar::from_json_terms(&terms).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pi_term(num: i64, den: i64, p: i32) -> PiScalar {
        PiScalar::monomial(rat(num, den), p)
    }

    #[test]
    fn add_examples() {
        assert!((PiScalar::from_int(2) + PiScalar::from_int(-2)).is_zero());
        assert_eq!(PiScalar::pi() + pi_term(3, 1, 1), pi_term(4, 1, 1));
        let mixed = pi_term(1, 1, -1) + PiScalar::pi();
        assert_eq!(mixed.num_terms(), 2);
        assert_eq!(mixed.coefficient(-1), int(1));
        assert_eq!(mixed.coefficient(1), int(1));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(pi_term(2, 1, 1) * pi_term(3, 1, -1), PiScalar::from_int(6));
        let x = pi_term(5, 7, 3) + PiScalar::frac(-1, 2);
        assert_eq!(PiScalar::one() * x.clone(), x);
        let a = PiScalar::pi() + PiScalar::one();
        let b = PiScalar::pi() - PiScalar::one();
        assert_eq!(a * b, pi_term(1, 1, 2) - PiScalar::one());
    }

    #[test]
    fn div_monomial_examples() {
        // omega_3 / (pi * omega_2)
        let q = omega(3).div_monomial(&(PiScalar::pi() * omega(2))).unwrap();
        assert_eq!(q, pi_term(4, 3, -1));
        let x = pi_term(3, 5, 2) + PiScalar::one();
        assert_eq!(x.div_monomial(&PiScalar::one()).unwrap(), x);
        let two = PiScalar::pi() + PiScalar::one();
        assert!(matches!(two.div_monomial(&two), Err(Error::NonMonomialDivisor(_))));
        assert!(matches!(x.div_monomial(&PiScalar::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn div_exact_examples() {
        let a = PiScalar::pi() + PiScalar::one();
        let b = PiScalar::pi() - PiScalar::one();
        let prod = (&a * &b).shift(-3);
        assert_eq!(prod.div_exact(&a).unwrap(), b.shift(-3));
        assert!(matches!(a.div_exact(&b), Err(Error::NotDivisible(..))));
        assert!(matches!(a.div_exact(&PiScalar::zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn omega_values() {
        assert_eq!(omega(0), PiScalar::one());
        assert_eq!(omega(1), PiScalar::from_int(2));
        assert_eq!(omega(2), PiScalar::pi());
        assert_eq!(omega(3), pi_term(4, 3, 1));
        assert_eq!(omega(4), pi_term(1, 2, 2));
        assert_eq!(omega(5), pi_term(8, 15, 2));
    }

    #[test]
    fn omega_recursion() {
        for m in 0..=40u32 {
            let ratio = omega(m + 2).div_monomial(&omega(m)).unwrap();
            assert_eq!(ratio, pi_term(2, (m + 2) as i64, 1), "m = {m}");
        }
    }

    #[test]
    fn display() {
        assert_eq!(pi_term(4, 3, -1).to_string(), "4/3 * pi^-1");
        assert_eq!(PiScalar::zero().to_string(), "0");
        assert_eq!((PiScalar::pi() - PiScalar::from_int(2)).to_string(), "-2 + pi");
        assert_eq!(pi_term(-1, 2, 2).to_string(), "-1/2 * pi^2");
    }

    #[test]
    fn json_round_trip() {
        let x = pi_term(4, 3, -1) + pi_term(-7, 2, 5);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(
            s,
            r#"[{"den":3,"num":4,"pi_power":-1},{"den":2,"num":-7,"pi_power":5}]"#
        );
        let back: PiScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let big = PiScalar::from_rational(Rational::from_integer(factorial(30)));
        let s = serde_json::to_string(&big).unwrap();
        assert!(s.contains('"'));
        assert_eq!(serde_json::from_str::<PiScalar>(&s).unwrap(), big);
    }

    fn arb_scalar() -> impl Strategy<Value = PiScalar> {
        prop::collection::vec((-3i32..=3, -6i64..=6, 1i64..=5), 0..4).prop_map(|ts| {
            PiScalar::from_terms(ts.into_iter().map(|(p, n, d)| (p, rat(n, d))))
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn div_exact_inverts_mul(a in arb_scalar(), b in arb_scalar()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b).unwrap(), a);
        }

        #[test]
        fn canonical_form(a in arb_scalar(), b in arb_scalar()) {
            let prod = &a * &b;
            for (_, q) in prod.terms() {
                prop_assert!(!q.is_zero());
                prop_assert!(q.denom().is_positive());
                prop_assert_eq!(num_integer::Integer::gcd(q.numer(), q.denom()), BigInt::one());
            }
        }
    }
}
