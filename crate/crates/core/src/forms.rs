//! Free graded-commutative algebra on the invariant generators
//! `alpha, beta, gamma` (odd) and `theta0, theta1, theta2, theta_s` (even),
//! with the Lie derivative `L_T` and the radial contraction `i_R`.
//!
//! This is an oracle: it recomputes the `t_hat` structure constants of the
//! area module from the forms `beta_{k,q}`, `gamma_{k,q}` without using
//! [`crate::areamod`].

use std::collections::BTreeMap;
use std::fmt;

use crate::areamod::{area_basis, AreaIndex, AreaKind};
use crate::error::{Error, Result};
use crate::scalars::{factorial, format_combination, omega, PiScalar, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Alpha,
    Beta,
    Gamma,
    Theta0,
    Theta1,
    Theta2,
    ThetaS,
}

impl Generator {
    pub const ALL: [Generator; 7] = [
        Generator::Alpha,
        Generator::Beta,
        Generator::Gamma,
        Generator::Theta0,
        Generator::Theta1,
        Generator::Theta2,
        Generator::ThetaS,
    ];

    pub fn is_odd(self) -> bool {
        (self as usize) < 3
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Alpha => "alpha",
            Generator::Beta => "beta",
            Generator::Gamma => "gamma",
            Generator::Theta0 => "theta0",
            Generator::Theta1 => "theta1",
            Generator::Theta2 => "theta2",
            Generator::ThetaS => "theta_s",
        }
    }
}

/// A monomial in canonical order: odd generators (each at most once) by
/// increasing index, then powers of the even ones.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormMonomial {
    odd: [bool; 3],
    even: [u32; 4],
}

impl FormMonomial {
    pub fn generator(g: Generator) -> Self {
        let mut m = Self::default();
        let i = g as usize;
        if g.is_odd() {
            m.odd[i] = true;
        } else {
            m.even[i - 3] = 1;
        }
        m
    }

    pub fn odd_degree(&self) -> usize {
        self.odd.iter().filter(|&&b| b).count()
    }

    pub fn exponent(&self, g: Generator) -> u32 {
        let i = g as usize;
        if g.is_odd() {
            u32::from(self.odd[i])
        } else {
            self.even[i - 3]
        }
    }

    /// Product with its sign, or `None` if an odd generator repeats.
    fn mul(&self, other: &Self) -> Option<(bool, Self)> {
        let mut negative = false;
        let mut out = *self;
        for j in 0..3 {
            if !other.odd[j] {
                continue;
            }
            if self.odd[j] {
                return None;
            }
            // moving other's generator j left past self's odd generators above j
            let passed = (j + 1..3).filter(|&i| self.odd[i]).count();
            negative ^= passed % 2 == 1;
            out.odd[j] = true;
        }
        for i in 0..4 {
            out.even[i] += other.even[i];
        }
        Some((negative, out))
    }

    /// Factors in canonical order, with repetition.
    fn factors(&self) -> Vec<Generator> {
        let mut out = Vec::new();
        for g in Generator::ALL {
            for _ in 0..self.exponent(g) {
                out.push(g);
            }
        }
        out
    }
}

impl fmt::Display for FormMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for g in Generator::ALL {
            match self.exponent(g) {
                0 => {}
                1 => parts.push(g.name().to_string()),
                e => parts.push(format!("{}^{e}", g.name())),
            }
        }
        f.write_str(&parts.join("*"))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InvariantForm {
    terms: BTreeMap<FormMonomial, PiScalar>,
}

impl InvariantForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(FormMonomial::default(), PiScalar::one())
    }

    pub fn generator(g: Generator) -> Self {
        Self::monomial(FormMonomial::generator(g), PiScalar::one())
    }

    pub fn monomial(m: FormMonomial, c: PiScalar) -> Self {
        let mut f = Self::zero();
        f.add_term(m, &c);
        f
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FormMonomial, &PiScalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: FormMonomial, c: &PiScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        let mut out = Self::zero();
        for (m, x) in &self.terms {
            out.add_term(*m, &(x * c));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&PiScalar::from_int(-1)))
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some((negative, m)) = a.mul(b) {
                    let c = x * y;
                    out.add_term(m, &if negative { -c } else { c });
                }
            }
        }
        out
    }

    /// Whether every term has odd total degree, even total degree, or mixed (`None`).
    pub fn parity(&self) -> Option<bool> {
        let mut ps = self.terms.keys().map(|m| m.odd_degree() % 2 == 1);
        let first = ps.next()?;
        ps.all(|p| p == first).then_some(first)
    }

    /// Applies the derivation determined by its values on generators.
    /// `odd` selects an antiderivation.
    fn derivation<F>(&self, odd: bool, rule: F) -> Result<Self>
    where
        F: Fn(Generator) -> Result<InvariantForm>,
    {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let factors = m.factors();
            for i in 0..factors.len() {
                let d = rule(factors[i])?;
                if d.is_zero() {
                    continue;
                }
                let mut prod = Self::one();
                let mut sign_odd = 0;
                for (j, g) in factors.iter().enumerate() {
                    if j == i {
                        prod = prod.wedge(&d);
                    } else {
                        if j < i && g.is_odd() {
                            sign_odd += 1;
                        }
                        prod = prod.wedge(&Self::generator(*g));
                    }
                }
                let negative = odd && sign_odd % 2 == 1;
                let c = if negative { -c.clone() } else { c.clone() };
                out = out.add(&prod.scale(&c));
            }
        }
        Ok(out)
    }

    /// `L_T`: `beta -> gamma`, `theta1 -> 2 theta0`, `theta2 -> theta1`, all
    /// other generators to zero.
    pub fn lie_t(&self) -> Self {
        self.derivation(false, |g| {
            Ok(match g {
                Generator::Beta => Self::generator(Generator::Gamma),
                Generator::Theta1 => Self::generator(Generator::Theta0).scale(&PiScalar::from_int(2)),
                Generator::Theta2 => Self::generator(Generator::Theta1),
                _ => Self::zero(),
            })
        })
        .expect("total rule")
    }

    /// `i_R` at `r = 1`: `theta0 -> gamma`, `theta1 -> beta`, and
    /// `beta, gamma, theta2 -> 0`. Forms containing `alpha` or `theta_s`
    /// are rejected.
    pub fn contract_r(&self) -> Result<Self> {
        for m in self.terms.keys() {
            if m.exponent(Generator::Alpha) > 0 {
                return Err(Error::ContractionDomain("alpha"));
            }
            if m.exponent(Generator::ThetaS) > 0 {
                return Err(Error::ContractionDomain("theta_s"));
            }
        }
        self.derivation(true, |g| {
            Ok(match g {
                Generator::Theta0 => Self::generator(Generator::Gamma),
                Generator::Theta1 => Self::generator(Generator::Beta),
                _ => Self::zero(),
            })
        })
    }
}

impl fmt::Display for InvariantForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(self.terms.iter().map(|(m, c)| (c, m.to_string()))))
    }
}

/// `c_{n,k,q} = 1 / (q! (n-k+q)! (k-2q)! omega_{2n-k})`.
pub fn form_constant(n: u32, k: u32, q: u32) -> PiScalar {
    let den = factorial(q as u64) * factorial((n + q - k) as u64) * factorial((k - 2 * q) as u64);
    let w = omega(2 * n - k);
    let (p, c) = w.as_monomial().expect("omega is a monomial");
    PiScalar::monomial(Rational::new(1.into(), den) / c, -p)
}

fn theta_monomial(odd: Generator, e0: u32, e1: u32, e2: u32) -> FormMonomial {
    let mut m = FormMonomial::generator(odd);
    m.even = [e0, e1, e2, 0];
    m
}

/// The form `beta_{k,q}` or `gamma_{k,q}` behind a basis measure.
pub fn basis_form(n: u32, idx: AreaIndex) -> InvariantForm {
    let (k, q) = (idx.k, idx.q);
    let c = form_constant(n, k, q);
    match idx.kind {
        AreaKind::B => InvariantForm::monomial(theta_monomial(Generator::Beta, n + q - k, k - 2 * q - 1, q), c),
        AreaKind::Gamma => InvariantForm::monomial(
            theta_monomial(Generator::Gamma, n + q - k - 1, k - 2 * q, q),
            c.scale(&Rational::new(1.into(), 2.into())),
        ),
    }
}

pub fn beta_form(n: u32, k: i64, q: i64) -> Result<InvariantForm> {
    Ok(basis_form(n, AreaIndex::new(n, AreaKind::B, k, q)?))
}

pub fn gamma_form(n: u32, k: i64, q: i64) -> Result<InvariantForm> {
    Ok(basis_form(n, AreaIndex::new(n, AreaKind::Gamma, k, q)?))
}

/// `(k-2q) beta_{k,q} + 2(n-k+q) gamma_{k,q}`, the form behind a multiple of `Delta_{k,q}`.
pub fn delta_form(n: u32, k: u32, q: u32) -> InvariantForm {
    let mut out = InvariantForm::zero();
    let (nn, kk, qq) = (n as i64, k as i64, q as i64);
    if let Some(b) = AreaIndex::checked(n, AreaKind::B, kk, qq) {
        out = out.add(&basis_form(n, b).scale(&PiScalar::from_int(kk - 2 * qq)));
    }
    if let Some(g) = AreaIndex::checked(n, AreaKind::Gamma, kk, qq) {
        out = out.add(&basis_form(n, g).scale(&PiScalar::from_int(2 * (nn - kk + qq))));
    }
    out
}

/// One `from -> to` entry of a structure table.
pub type TableEntries = BTreeMap<AreaIndex, BTreeMap<AreaIndex, PiScalar>>;

/// Recomputes `t_hat * B_{k,q}` and `t_hat * Gamma_{k,q}` as `(1/pi) L_T`
/// of the underlying forms, expanded in the degree `k-1` basis forms.
pub fn derive_t_hat_table(n: u32) -> Result<TableEntries> {
    if n == 0 {
        return Err(Error::InvalidIndex("n = 0".into()));
    }
    let basis = area_basis(n);
    let by_monomial: BTreeMap<FormMonomial, (AreaIndex, PiScalar)> = basis
        .iter()
        .map(|&i| {
            let f = basis_form(n, i);
            let (m, c) = f.terms().next().expect("nonzero basis form");
            (*m, (i, c.clone()))
        })
        .collect();
    let inv_pi = PiScalar::pi_pow(-1);
    let mut table = TableEntries::new();
    for &from in &basis {
        let image = basis_form(n, from).lie_t().scale(&inv_pi);
        let mut row = BTreeMap::new();
        for (m, c) in image.terms() {
            let (to, unit) = by_monomial
                .get(m)
                .ok_or_else(|| Error::OracleResidual(format!("{from}: term {m} outside the basis")))?;
            if to.k + 1 != from.k {
                return Err(Error::OracleResidual(format!("{from}: term {m} has the wrong degree")));
            }
            row.insert(*to, c.div_monomial(unit)?);
        }
        table.insert(from, row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::areamod::AreaModule;
    use proptest::prelude::*;

    fn g(x: Generator) -> InvariantForm {
        InvariantForm::generator(x)
    }

    use Generator::*;

    #[test]
    fn wedge_signs() {
        let bg = g(Beta).wedge(&g(Gamma));
        let gb = g(Gamma).wedge(&g(Beta));
        assert_eq!(gb, bg.scale(&PiScalar::from_int(-1)));
        assert!(g(Beta).wedge(&g(Beta)).is_zero());
        assert_eq!(g(Theta0).wedge(&g(Theta1)), g(Theta1).wedge(&g(Theta0)));
        let abg = g(Alpha).wedge(&g(Beta)).wedge(&g(Gamma));
        let gab = g(Gamma).wedge(&g(Alpha)).wedge(&g(Beta));
        let bag = g(Beta).wedge(&g(Alpha)).wedge(&g(Gamma));
        assert_eq!(gab, abg);
        assert_eq!(bag, abg.scale(&PiScalar::from_int(-1)));
        assert_eq!(g(Beta).wedge(&g(Theta2)).to_string(), "beta*theta2");
    }

    #[test]
    fn lie_examples() {
        assert_eq!(g(Beta).lie_t(), g(Gamma));
        assert!(g(Theta0).lie_t().is_zero());
        assert!(g(Alpha).lie_t().is_zero() && g(ThetaS).lie_t().is_zero());
        let expected = g(Gamma).wedge(&g(Theta2)).add(&g(Beta).wedge(&g(Theta1)));
        assert_eq!(g(Beta).wedge(&g(Theta2)).lie_t(), expected);
        let t1sq = g(Theta1).wedge(&g(Theta1));
        assert_eq!(t1sq.lie_t(), g(Theta0).wedge(&g(Theta1)).scale(&PiScalar::from_int(4)));
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(g(Theta0).contract_r().unwrap(), g(Gamma));
        assert_eq!(g(Theta1).contract_r().unwrap(), g(Beta));
        assert!(g(Gamma).wedge(&g(Theta0)).contract_r().unwrap().is_zero());
        // beta ^ theta0 -> -beta ^ gamma
        assert_eq!(
            g(Beta).wedge(&g(Theta0)).contract_r().unwrap(),
            g(Beta).wedge(&g(Gamma)).scale(&PiScalar::from_int(-1))
        );
        assert!(matches!(g(Alpha).contract_r(), Err(Error::ContractionDomain("alpha"))));
        assert!(matches!(g(ThetaS).contract_r(), Err(Error::ContractionDomain("theta_s"))));
    }

    #[test]
    fn basis_form_examples() {
        let c = form_constant(2, 3, 1);
        assert_eq!(beta_form(2, 3, 1).unwrap(), g(Beta).wedge(&g(Theta2)).scale(&c));
        let c = form_constant(2, 0, 0);
        let half = PiScalar::frac(1, 2);
        assert_eq!(gamma_form(2, 0, 0).unwrap(), g(Gamma).wedge(&g(Theta0)).scale(&(&c * &half)));
        assert!(beta_form(2, 2, 1).is_err());
        // 1 / (1! 1! 0! omega_2)
        assert_eq!(form_constant(2, 2, 1), PiScalar::pi_pow(-1));
    }

    #[test]
    fn t_hat_table_examples() {
        let t = derive_t_hat_table(2).unwrap();
        let get = |from, to| t[&from].get(&to).cloned().unwrap_or_default();
        assert_eq!(get(AreaIndex::gamma(2, 1), AreaIndex::gamma(1, 0)), PiScalar::monomial(crate::scalars::rat(4, 3), -1));
        assert_eq!(get(AreaIndex::b(3, 1), AreaIndex::b(2, 0)), PiScalar::one());
    }

    #[test]
    fn t_hat_table_matches_module() {
        for n in 1..=5 {
            let oracle = derive_t_hat_table(n).unwrap();
            let m = AreaModule::get(n).unwrap();
            for (from, image) in m.hat_t_table() {
                let got: BTreeMap<AreaIndex, PiScalar> = image.terms().map(|(i, c)| (i, c.clone())).collect();
                assert_eq!(oracle[from], got, "n = {n}, {from}");
            }
        }
    }

    #[test]
    fn delta_forms_are_radial() {
        for n in 1..=5 {
            for k in 0..2 * n {
                for q in 0..=k / 2 {
                    if crate::valalg::MuIndex::is_valid(n, k as i64, q as i64) {
                        let f = delta_form(n, k, q);
                        assert!(!f.is_zero());
                        assert!(f.contract_r().unwrap().is_zero(), "n = {n}, k = {k}, q = {q}");
                    }
                }
            }
        }
    }

    fn arb_form(allow_alpha: bool) -> impl Strategy<Value = InvariantForm> {
        let gens: Vec<Generator> = Generator::ALL
            .into_iter()
            .filter(|x| allow_alpha || !matches!(x, Alpha | ThetaS))
            .collect();
        let mono = (proptest::sample::subsequence(gens, 0..=4), -3i64..=3);
        proptest::collection::vec(mono, 1..4).prop_map(|ms| {
            ms.into_iter().fold(InvariantForm::zero(), |acc, (gs, c)| {
                let m = gs.into_iter().fold(InvariantForm::one(), |p, x| p.wedge(&g(x)));
                acc.add(&m.scale(&PiScalar::from_int(c)))
            })
        })
    }

    fn homogeneous(f: InvariantForm, odd: bool) -> InvariantForm {
        let mut out = InvariantForm::zero();
        for (m, c) in f.terms() {
            if (m.odd_degree() % 2 == 1) == odd {
                out.add_term(*m, c);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn lie_is_a_derivation(a in arb_form(true), b in arb_form(true)) {
            let lhs = a.wedge(&b).lie_t();
            let rhs = a.lie_t().wedge(&b).add(&a.wedge(&b.lie_t()));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn contraction_is_an_antiderivation(a in arb_form(false), b in arb_form(false), odd in any::<bool>()) {
            let a = homogeneous(a, odd);
            let lhs = a.wedge(&b).contract_r().unwrap();
            let second = a.wedge(&b.contract_r().unwrap());
            let second = if odd { second.scale(&PiScalar::from_int(-1)) } else { second };
            let rhs = a.contract_r().unwrap().wedge(&b).add(&second);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn wedge_is_associative(a in arb_form(true), b in arb_form(true), c in arb_form(true)) {
            prop_assert_eq!(a.wedge(&b).wedge(&c), a.wedge(&b.wedge(&c)));
        }
    }
}
