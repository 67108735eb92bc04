//! Graded polynomials in `(s,t)` or `(t,u)` with `deg t = 1`, `deg s = deg u = 2`,
//! related by `u = 4s - t^2`.
//!
//! The families `f_k`, `p_k`, `q_k` are the Taylor coefficients of
//! `log(1 + tx + sx^2)`, `1/(1 + tx + sx^2)` and `-1/(1 + tx + sx^2)^2`.
//! Constructors build them from recurrences; the closed forms are kept as
//! separate functions and compared against the recurrences in debug builds.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{binomial, factorial, int, rat, PiScalar, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coords {
    /// Generators `s` (degree 2) and `t`.
    St,
    /// Generators `u` (degree 2) and `t`.
    Tu,
}

impl Coords {
    fn even_name(self) -> &'static str {
        match self {
            Coords::St => "s",
            Coords::Tu => "u",
        }
    }
}

impl std::str::FromStr for Coords {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "st" => Ok(Coords::St),
            "tu" => Ok(Coords::Tu),
            _ => Err(Error::Type(format!("unknown coordinates {s:?}, expected st or tu"))),
        }
    }
}

/// Exponent pair `(a, b)`: `a` is the power of the degree-2 generator
/// (`s` or `u`), `b` the power of `t`.
pub type Exponents = (u32, u32);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPoly {
    coords: Coords,
    terms: BTreeMap<Exponents, PiScalar>,
}

impl GradedPoly {
    pub fn zero(coords: Coords) -> Self {
        Self { coords, terms: BTreeMap::new() }
    }

    pub fn constant(coords: Coords, c: PiScalar) -> Self {
        Self::monomial(coords, 0, 0, c)
    }

    pub fn one(coords: Coords) -> Self {
        Self::constant(coords, PiScalar::one())
    }

    /// `c * x^a * t^b` where `x` is `s` or `u` according to `coords`.
    pub fn monomial(coords: Coords, a: u32, b: u32, c: PiScalar) -> Self {
        let mut p = Self::zero(coords);
        p.add_term((a, b), c);
        p
    }

    pub fn t(coords: Coords) -> Self {
        Self::monomial(coords, 0, 1, PiScalar::one())
    }

    pub fn s() -> Self {
        Self::monomial(Coords::St, 1, 0, PiScalar::one())
    }

    pub fn u() -> Self {
        Self::monomial(Coords::Tu, 1, 0, PiScalar::one())
    }

    pub fn coords(&self) -> Coords {
        self.coords
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponents, &PiScalar)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coefficient(&self, a: u32, b: u32) -> PiScalar {
        self.terms.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Exponents, c: PiScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        let mut out = Self::zero(self.coords);
        for (e, x) in &self.terms {
            out.add_term(*e, x * c);
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&PiScalar::from_rational(q.clone()))
    }

    fn check_coords(&self, other: &Self) -> Result<()> {
        if self.coords != other.coords {
            return Err(Error::CoordsMismatch(self.coords, other.coords));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_coords(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_coords(other)?;
        let mut out = Self::zero(self.coords);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(self.coords), |acc, _| acc.try_mul(self).expect("same coords"))
    }

    /// The common degree `2a + b` of all terms, or `None` for the zero
    /// polynomial and for inhomogeneous ones.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(|(a, b)| 2 * a + b);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous_of(&self, d: u32) -> bool {
        self.terms.keys().all(|(a, b)| 2 * a + b == d)
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(a, b)| 2 * a + b).max()
    }

    /// Degree-`d` homogeneous component.
    pub fn component(&self, d: u32) -> Self {
        Self {
            coords: self.coords,
            terms: self
                .terms
                .iter()
                .filter(|((a, b), _)| 2 * a + b == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Substitutes `u = 4s - t^2` or `s = (u + t^2)/4`.
    pub fn convert(&self, target: Coords) -> Self {
        if target == self.coords {
            return self.clone();
        }
        let sub = match target {
            // the even generator of the source, written in the target
            Coords::Tu => GradedPoly::u()
                .try_add(&GradedPoly::t(Coords::Tu).pow(2))
                .unwrap()
                .scale_rational(&rat(1, 4)),
            Coords::St => GradedPoly::s()
                .scale_rational(&int(4))
                .try_sub(&GradedPoly::t(Coords::St).pow(2))
                .unwrap(),
        };
        let t = GradedPoly::t(target);
        let mut out = GradedPoly::zero(target);
        for ((a, b), c) in &self.terms {
            let term = sub.pow(*a).try_mul(&t.pow(*b)).unwrap().scale(c);
            out = out.try_add(&term).unwrap();
        }
        out
    }

    /// Evaluates a polynomial whose coefficients are rational multiples of
    /// `pi^0` into another ring given the images of the generators.
    pub fn eval_with<T, F, G>(&self, zero: T, mut monomial: F, mut scale: G) -> T
    where
        T: Add<Output = T>,
        F: FnMut(u32, u32) -> T,
        G: FnMut(&PiScalar, T) -> T,
    {
        let mut acc = zero;
        for ((a, b), c) in &self.terms {
            acc = acc + scale(c, monomial(*a, *b));
        }
        acc
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            coords: self.coords,
            terms: self
                .terms
                .iter()
                .map(|((a, b), c)| PolyTermJson { coeff: c.clone(), s_or_u: *a, t: *b })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Self {
        let mut p = GradedPoly::zero(j.coords);
        for t in &j.terms {
            p.add_term((t.s_or_u, t.t), t.coeff.clone());
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub coeff: PiScalar,
    pub s_or_u: u32,
    pub t: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub coords: Coords,
    pub terms: Vec<PolyTermJson>,
}

impl Neg for &GradedPoly {
    type Output = GradedPoly;
    fn neg(self) -> GradedPoly {
        self.scale(&PiScalar::from_int(-1))
    }
}

impl Add for &GradedPoly {
    type Output = GradedPoly;
    fn add(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_add(rhs).expect("coordinate mismatch in +")
    }
}

impl Sub for &GradedPoly {
    type Output = GradedPoly;
    fn sub(self, rhs: &GradedPoly) -> GradedPoly {
        self.try_sub(rhs).expect("coordinate mismatch in -")
    }
}

fn monomial_label(coords: Coords, a: u32, b: u32) -> String {
    let mut parts = Vec::new();
    match a {
        0 => {}
        1 => parts.push(coords.even_name().to_string()),
        _ => parts.push(format!("{}^{a}", coords.even_name())),
    }
    match b {
        0 => {}
        1 => parts.push("t".to_string()),
        _ => parts.push(format!("t^{b}")),
    }
    parts.join("*")
}

impl fmt::Display for GradedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self
            .terms
            .iter()
            .map(|((a, b), c)| (c, monomial_label(self.coords, *a, *b)));
        f.write_str(&crate::scalars::format_combination(terms))
    }
}

/// Partial differential operators on `(t,u)` polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiffOp {
    /// `d/dt`
    Dt,
    /// `d/du`
    Du,
    /// `t d/dt`
    TDt,
    /// `u d/du`
    UDu,
}

pub fn apply_diff(op: DiffOp, p: &GradedPoly) -> Result<GradedPoly> {
    if p.coords != Coords::Tu {
        return Err(Error::NeedsTuCoords);
    }
    let mut out = GradedPoly::zero(Coords::Tu);
    for ((a, b), c) in &p.terms {
        let (factor, e) = match op {
            DiffOp::Dt if *b > 0 => (*b, (*a, b - 1)),
            DiffOp::Du if *a > 0 => (*a, (a - 1, *b)),
            DiffOp::TDt => (*b, (*a, *b)),
            DiffOp::UDu => (*a, (*a, *b)),
            _ => continue,
        };
        out.add_term(e, c.scale(&int(factor as i64)));
    }
    Ok(out)
}

fn signed(sign_odd: bool, v: Rational) -> Rational {
    if sign_odd {
        -v
    } else {
        v
    }
}

fn big(v: BigInt) -> Rational {
    Rational::from_integer(v)
}

fn debug_check(name: &str, k: u32, from_recurrence: &GradedPoly, closed: &[GradedPoly]) {
    if cfg!(debug_assertions) {
        for c in closed {
            let c = c.convert(from_recurrence.coords);
            assert_eq!(&c, from_recurrence, "{name}_{k}: recurrence and closed form disagree");
        }
    }
}

/// `f_k` built from `k f_k = -(k-1) t f_{k-1} - (k-2) s f_{k-2}`.
pub fn fu_f(k: u32, coords: Coords) -> GradedPoly {
    assert!(k >= 1, "f_k is defined for k >= 1");
    let t = GradedPoly::t(Coords::St);
    let s = GradedPoly::s();
    let mut prev2 = GradedPoly::zero(Coords::St); // f_0 = 0
    let mut prev1 = t.clone();
    if k >= 2 {
        prev2 = prev1.clone();
        prev1 = &s - &t.pow(2).scale_rational(&rat(1, 2));
    }
    for j in 3..=k {
        let j = j as i64;
        let next = (&t.try_mul(&prev1).unwrap().scale_rational(&int(-(j - 1)))
            - &s.try_mul(&prev2).unwrap().scale_rational(&int(j - 2)))
            .scale_rational(&rat(1, j));
        prev2 = prev1;
        prev1 = next;
    }
    let f = if k == 1 { t } else { prev1 };
    assert!(f.is_homogeneous_of(k), "f_{k} is not homogeneous");
    debug_check("f", k, &f, &[fu_f_closed_st(k), fu_f_closed_tu(k)]);
    f.convert(coords)
}

/// `f_k = (-1)^(k+1) sum_q (-1)^q / (k-2q) C(k-q-1, q) s^q t^(k-2q)`, with the
/// coefficient written as `(k-q-1)! / (q! (k-2q)!)` so that the `q = k/2`
/// term is defined.
pub fn fu_f_closed_st(k: u32) -> GradedPoly {
    let k = k as i64;
    let mut p = GradedPoly::zero(Coords::St);
    for q in 0..=k / 2 {
        let c = Rational::new(
            factorial((k - q - 1) as u64),
            factorial(q as u64) * factorial((k - 2 * q) as u64),
        );
        let c = signed((k + 1 + q) % 2 == 1, c);
        p.add_term((q as u32, (k - 2 * q) as u32), c.into());
    }
    p
}

/// `f_k = 1/(k (-2)^(k-1)) sum_q (-1)^q C(k, 2q) t^(k-2q) u^q`.
pub fn fu_f_closed_tu(k: u32) -> GradedPoly {
    let k = k as i64;
    let pre = Rational::new(BigInt::one(), BigInt::from(k) * BigInt::from(-2).pow((k - 1) as u32));
    let mut p = GradedPoly::zero(Coords::Tu);
    for q in 0..=k / 2 {
        let c = signed(q % 2 == 1, big(binomial(k, 2 * q))) * &pre;
        p.add_term((q as u32, (k - 2 * q) as u32), c.into());
    }
    p
}

fn p_family_st(kmax: u32) -> Vec<GradedPoly> {
    let t = GradedPoly::t(Coords::St);
    let s = GradedPoly::s();
    let mut out = vec![GradedPoly::one(Coords::St)];
    for k in 1..=kmax as usize {
        let mut next = -&t.try_mul(&out[k - 1]).unwrap();
        if k >= 2 {
            next = &next - &s.try_mul(&out[k - 2]).unwrap();
        }
        out.push(next);
    }
    out
}

/// `p_k` built from `p_k = -t p_{k-1} - s p_{k-2}`, `p_0 = 1`.
pub fn poly_p(k: u32, coords: Coords) -> GradedPoly {
    let p = p_family_st(k).pop().unwrap();
    assert!(p.is_homogeneous_of(k), "p_{k} is not homogeneous");
    if cfg!(debug_assertions) {
        let via_f = apply_diff(DiffOp::Du, &fu_f(k + 2, Coords::Tu))
            .unwrap()
            .scale_rational(&int(4));
        debug_check("p", k, &p, &[poly_p_closed_st(k), poly_p_closed_tu(k), via_f]);
    }
    p.convert(coords)
}

/// `p_k = (-1)^k sum_q (-1)^q C(k-q, q) s^q t^(k-2q)`.
pub fn poly_p_closed_st(k: u32) -> GradedPoly {
    let k = k as i64;
    let mut p = GradedPoly::zero(Coords::St);
    for q in 0..=k / 2 {
        let c = signed((k + q) % 2 == 1, big(binomial(k - q, q)));
        p.add_term((q as u32, (k - 2 * q) as u32), c.into());
    }
    p
}

/// `p_k = (-1)^k / 2^k sum_q (-1)^q C(k+1, 2q+1) t^(k-2q) u^q`.
pub fn poly_p_closed_tu(k: u32) -> GradedPoly {
    let k = k as i64;
    let pre = Rational::new(BigInt::one(), BigInt::one() << k as usize);
    let mut p = GradedPoly::zero(Coords::Tu);
    for q in 0..=k / 2 {
        let c = signed((k + q) % 2 == 1, big(binomial(k + 1, 2 * q + 1))) * &pre;
        p.add_term((q as u32, (k - 2 * q) as u32), c.into());
    }
    p
}

/// `q_k = -sum_{i+j=k} p_i p_j`.
pub fn poly_q(k: u32, coords: Coords) -> GradedPoly {
    let ps = p_family_st(k);
    let mut q = GradedPoly::zero(Coords::St);
    for i in 0..=k as usize {
        q = &q - &ps[i].try_mul(&ps[k as usize - i]).unwrap();
    }
    assert!(q.is_homogeneous_of(k), "q_{k} is not homogeneous");
    if cfg!(debug_assertions) {
        let via_p = apply_diff(DiffOp::Du, &poly_p(k + 2, Coords::Tu))
            .unwrap()
            .scale_rational(&int(4));
        debug_check("q", k, &q, &[poly_q_closed_st(k), poly_q_closed_tu(k), via_p]);
    }
    q.convert(coords)
}

/// `q_k = (-1)^(k+1) sum_q (-1)^q (q+1) C(k+1-q, q+1) s^q t^(k-2q)`.
pub fn poly_q_closed_st(k: u32) -> GradedPoly {
    let k = k as i64;
    let mut p = GradedPoly::zero(Coords::St);
    for q in 0..=k / 2 {
        let c = big(binomial(k + 1 - q, q + 1) * BigInt::from(q + 1));
        p.add_term((q as u32, (k - 2 * q) as u32), signed((k + 1 + q) % 2 == 1, c).into());
    }
    p
}

/// `q_k = (-1)^(k+1) / 2^k sum_q (-1)^q (q+1) C(k+3, 2q+3) t^(k-2q) u^q`.
pub fn poly_q_closed_tu(k: u32) -> GradedPoly {
    let k = k as i64;
    let pre = Rational::new(BigInt::one(), BigInt::one() << k as usize);
    let mut p = GradedPoly::zero(Coords::Tu);
    for q in 0..=k / 2 {
        let c = big(binomial(k + 3, 2 * q + 3) * BigInt::from(q + 1));
        let c = signed((k + 1 + q) % 2 == 1, c) * &pre;
        p.add_term((q as u32, (k - 2 * q) as u32), c.into());
    }
    p
}

/// `sum_i (-1)^i C(n-i, i) C(2n-2i, n-i)`, which equals `2^n`.
pub fn ball_binomial_sum(n: u32) -> BigInt {
    let n = n as i64;
    (0..=n / 2)
        .map(|i| {
            let term = binomial(n - i, i) * binomial(2 * n - 2 * i, n - i);
            if i % 2 == 1 {
                -term
            } else {
                term
            }
        })
        .sum()
}

/// Left side `d/du [t d/dt + 2u d/du + 2] p` of the angularity condition.
pub fn angularity_lhs(p: &GradedPoly) -> Result<GradedPoly> {
    let euler = &(&apply_diff(DiffOp::TDt, p)? + &apply_diff(DiffOp::UDu, p)?.scale_rational(&int(2)))
        + &p.scale_rational(&int(2));
    apply_diff(DiffOp::Du, &euler)
}

/// Tests `d/du [t d/dt + 2u d/du + 2] p = 1/2 dq/dt` as an identity of
/// `(t,u)` polynomials; inputs in `(s,t)` are converted first.
pub fn angularity_condition(p: &GradedPoly, q: &GradedPoly) -> Result<bool> {
    let p = p.convert(Coords::Tu);
    let q = q.convert(Coords::Tu);
    let lhs = angularity_lhs(&p)?;
    let rhs = apply_diff(DiffOp::Dt, &q)?.scale_rational(&rat(1, 2));
    Ok(lhs == rhs)
}
