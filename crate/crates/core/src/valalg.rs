//! The algebra of unitarily invariant valuations on `C^n` in the basis of
//! hermitian intrinsic volumes `mu_{k,q}`.
//!
//! Multiplication by `s` and convolution by `s_hat`, `t_hat` are given by
//! explicit structure constants. Multiplication by `t` is obtained by
//! conjugating `t_hat` with the Fourier transform. Products are computed by
//! lifting one factor to a polynomial in `(s,t)`; convolutions by lifting to a
//! polynomial in `(s_hat, t_hat)` applied to the volume. The two routes share
//! no code beyond the basis, so comparing them through the Fourier transform
//! is a real test.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{Coords, GradedPoly};
use crate::scalars::{binomial, format_combination, int, omega, rat, PiScalar, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MuIndex {
    pub k: u32,
    pub q: u32,
}

impl MuIndex {
    pub fn is_valid(n: u32, k: i64, q: i64) -> bool {
        let n = n as i64;
        (0..=2 * n).contains(&k) && q >= 0.max(k - n) && q <= k / 2
    }

    /// The index if it is valid for `n`, else `None`.
    pub fn checked(n: u32, k: i64, q: i64) -> Option<MuIndex> {
        Self::is_valid(n, k, q).then_some(MuIndex { k: k as u32, q: q as u32 })
    }

    pub fn new(n: u32, k: i64, q: i64) -> Result<MuIndex> {
        Self::checked(n, k, q).ok_or_else(|| {
            let nn = n as i64;
            let why = if !(0..=2 * nn).contains(&k) {
                format!("needs 0 <= k <= 2n = {}", 2 * nn)
            } else if q < 0 {
                "needs q >= 0".to_string()
            } else if q < k - nn {
                format!("needs q >= k - n = {}", k - nn)
            } else {
                format!("needs q <= k/2 = {}", k / 2)
            };
            Error::InvalidIndex(format!("mu[{k},{q}] for n = {n}: {why}"))
        })
    }
}

impl fmt::Display for MuIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mu[{},{}]", self.k, self.q)
    }
}

fn check_degree(n: u32, k: i64) -> Result<()> {
    if (0..=2 * n as i64).contains(&k) {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange { k, max: 2 * n as i64 })
    }
}

pub fn dim_val(n: u32, k: i64) -> Result<usize> {
    check_degree(n, k)?;
    let k = k as u32;
    Ok(1 + (k / 2).min((2 * n - k) / 2) as usize)
}

/// Valid indices of degree `k`, by increasing `q`.
pub fn basis(n: u32, k: u32) -> Vec<MuIndex> {
    let lo = k.saturating_sub(n);
    (lo..=k / 2).map(|q| MuIndex { k, q }).collect()
}

pub fn full_basis(n: u32) -> Vec<MuIndex> {
    (0..=2 * n).flat_map(|k| basis(n, k)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Valuation {
    n: u32,
    coeffs: BTreeMap<MuIndex, PiScalar>,
}

impl Valuation {
    pub fn zero(n: u32) -> Self {
        Self { n, coeffs: BTreeMap::new() }
    }

    pub fn mu(n: u32, k: i64, q: i64) -> Result<Self> {
        let idx = MuIndex::new(n, k, q)?;
        Ok(Self::basis_element(n, idx))
    }

    pub fn basis_element(n: u32, idx: MuIndex) -> Self {
        let mut v = Self::zero(n);
        v.coeffs.insert(idx, PiScalar::one());
        v
    }

    /// Builds a valuation from `((k, q), coefficient)` pairs, dropping terms
    /// with invalid indices.
    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), PiScalar)>>(n: u32, it: I) -> Self {
        let mut v = Self::zero(n);
        for ((k, q), c) in it {
            if let Some(idx) = MuIndex::checked(n, k, q) {
                v.add_term(idx, &c);
            }
        }
        v
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (MuIndex, &PiScalar)> + '_ {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn coefficient(&self, idx: MuIndex) -> PiScalar {
        self.coeffs.get(&idx).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub(crate) fn add_term(&mut self, idx: MuIndex, c: &PiScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(idx).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&idx);
        }
    }

    pub fn scale(&self, c: &PiScalar) -> Self {
        let mut out = Self::zero(self.n);
        for (i, x) in &self.coeffs {
            out.add_term(*i, &(x * c));
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&PiScalar::from_rational(q.clone()))
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(*i, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&PiScalar::from_int(-1)))
    }

    /// Degree-`k` component.
    pub fn component(&self, k: u32) -> Self {
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| i.k == k)
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    /// Degrees carrying a nonzero coefficient, ascending.
    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.coeffs.keys().map(|i| i.k).collect();
        ds.dedup();
        ds
    }

    /// The single degree of a nonzero homogeneous valuation.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    /// Coordinates in [`basis`]`(n, k)`.
    pub fn coords_in_degree(&self, k: u32) -> Vec<PiScalar> {
        basis(self.n, k).into_iter().map(|i| self.coefficient(i)).collect()
    }

    pub fn from_coords(n: u32, k: u32, xs: &[PiScalar]) -> Self {
        let mut v = Self::zero(n);
        for (i, x) in basis(n, k).into_iter().zip(xs) {
            v.add_term(i, x);
        }
        v
    }

    /// Linear extension of a map on basis elements.
    pub fn map_basis<F: FnMut(MuIndex) -> Valuation>(&self, mut f: F) -> Valuation {
        let mut out = Valuation::zero(self.n);
        for (i, c) in &self.coeffs {
            for (j, d) in &f(*i).coeffs {
                out.add_term(*j, &(c * d));
            }
        }
        out
    }

    pub fn to_json(&self) -> ValuationJson {
        ValuationJson {
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| (format!("mu_{}_{}", i.k, i.q), c.clone()))
                .collect(),
            n: self.n,
        }
    }

    pub fn from_json(j: &ValuationJson) -> Result<Self> {
        let mut v = Valuation::zero(j.n);
        for (key, c) in &j.coeffs {
            let bad = || Error::InvalidIndex(key.clone());
            let rest = key.strip_prefix("mu_").ok_or_else(bad)?;
            let (k, q) = rest.split_once('_').ok_or_else(bad)?;
            let k: i64 = k.parse().map_err(|_| bad())?;
            let q: i64 = q.parse().map_err(|_| bad())?;
            v.add_term(MuIndex::new(j.n, k, q)?, c);
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValuationJson {
    pub coeffs: BTreeMap<String, PiScalar>,
    pub n: u32,
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(self.coeffs.iter().map(|(i, c)| (c, i.to_string()))))
    }
}

/// `F(mu_{k,q}) = mu_{2n-k, n-k+q}`.
pub fn fourier_index(n: u32, idx: MuIndex) -> MuIndex {
    MuIndex { k: 2 * n - idx.k, q: n + idx.q - idx.k }
}

pub fn fourier(v: &Valuation) -> Valuation {
    let n = v.n;
    Valuation { n, coeffs: v.coeffs.iter().map(|(i, c)| (fourier_index(n, *i), c.clone())).collect() }
}

fn pi_frac(num: i64, den: i64, power: i32) -> PiScalar {
    PiScalar::monomial(rat(num, den), power)
}

/// `s * mu_{k,q}` from the explicit structure constants.
pub fn s_times_mu(n: u32, idx: MuIndex) -> Valuation {
    let (k, q) = (idx.k as i64, idx.q as i64);
    Valuation::from_terms(
        n,
        [
            ((k + 2, q), pi_frac((k - 2 * q + 2) * (k - 2 * q + 1), 2 * (k + 2), -1)),
            ((k + 2, q + 1), pi_frac(2 * (q + 1) * (k - q + 1), k + 2, -1)),
        ],
    )
}

/// `omega_{2n-k+1} / (pi omega_{2n-k})`.
pub fn hat_t_prefactor(n: u32, k: u32) -> PiScalar {
    let m = 2 * n - k;
    (omega(m + 1) * PiScalar::pi_pow(-1)).div_monomial(&omega(m)).expect("omega is a monomial")
}

/// `t_hat * mu_{k,q}`.
pub fn hat_t_times_mu(n: u32, idx: MuIndex) -> Valuation {
    if idx.k == 0 {
        return Valuation::zero(n);
    }
    let (nn, k, q) = (n as i64, idx.k as i64, idx.q as i64);
    let pre = hat_t_prefactor(n, idx.k);
    Valuation::from_terms(
        n,
        [
            ((k - 1, q - 1), pre.scale(&int(k - 2 * q + 1))),
            ((k - 1, q), pre.scale(&int(2 * (nn - k + q + 1)))),
        ],
    )
}

/// `s_hat * mu_{k,q}`.
pub fn hat_s_times_mu(n: u32, idx: MuIndex) -> Valuation {
    let (nn, k, q) = (n as i64, idx.k as i64, idx.q as i64);
    let m = 2 * nn - k + 2;
    Valuation::from_terms(
        n,
        [
            ((k - 2, q - 2), pi_frac((k - 2 * q + 2) * (k - 2 * q + 1), 2 * m, -1)),
            ((k - 2, q - 1), pi_frac(2 * (nn - k + q + 1) * (nn - q + 1), m, -1)),
        ],
    )
}

/// Per-`n` structure tables, built once.
#[derive(Debug)]
pub struct ValAlgebra {
    n: u32,
    s_table: BTreeMap<MuIndex, Valuation>,
    t_table: BTreeMap<MuIndex, Valuation>,
    hat_t_table: BTreeMap<MuIndex, Valuation>,
    hat_s_table: BTreeMap<MuIndex, Valuation>,
    /// `monomials[d][a] = s^a t^(d-2a)`.
    monomials: Vec<Vec<Valuation>>,
    /// `hat_monomials[m][a] = s_hat^a t_hat^(m-2a) * vol`, of degree `2n - m`.
    hat_monomials: Vec<Vec<Valuation>>,
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<ValAlgebra>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<ValAlgebra>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn apply_table(table: &BTreeMap<MuIndex, Valuation>, v: &Valuation) -> Valuation {
    v.map_basis(|i| table[&i].clone())
}

impl ValAlgebra {
    /// Shared tables for `n`, computing them on first use.
    pub fn get(n: u32) -> Result<Arc<ValAlgebra>> {
        if n == 0 {
            return Err(Error::InvalidIndex("n must be at least 1".into()));
        }
        if let Some(a) = cache().lock().unwrap().get(&n) {
            return Ok(a.clone());
        }
        let built = Arc::new(Self::build(n));
        let mut guard = cache().lock().unwrap();
        Ok(guard.entry(n).or_insert(built).clone())
    }

    fn build(n: u32) -> ValAlgebra {
        let all = full_basis(n);
        let table = |f: fn(u32, MuIndex) -> Valuation| -> BTreeMap<MuIndex, Valuation> {
            all.iter().map(|&i| (i, f(n, i))).collect()
        };
        let s_table = table(s_times_mu);
        let hat_t_table = table(hat_t_times_mu);
        let hat_s_table = table(hat_s_times_mu);
        let t_table = all
            .iter()
            .map(|&i| {
                let img = fourier(&apply_table(&hat_t_table, &Valuation::basis_element(n, fourier_index(n, i))));
                (i, img)
            })
            .collect();
        let mut alg = ValAlgebra {
            n,
            s_table,
            t_table,
            hat_t_table,
            hat_s_table,
            monomials: Vec::new(),
            hat_monomials: Vec::new(),
        };
        let chi = alg.chi();
        let vol = alg.vol();
        for d in 0..=2 * n {
            let mut row = Vec::new();
            let mut hat_row = Vec::new();
            for a in 0..=d / 2 {
                let mut v = chi.clone();
                let mut w = vol.clone();
                for _ in 0..d - 2 * a {
                    v = apply_table(&alg.t_table, &v);
                    w = apply_table(&alg.hat_t_table, &w);
                }
                for _ in 0..a {
                    v = apply_table(&alg.s_table, &v);
                    w = apply_table(&alg.hat_s_table, &w);
                }
                row.push(v);
                hat_row.push(w);
            }
            alg.monomials.push(row);
            alg.hat_monomials.push(hat_row);
        }
        alg
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn check(&self, v: &Valuation) -> Result<()> {
        if v.n != self.n {
            return Err(Error::DimensionMismatch(v.n, self.n));
        }
        Ok(())
    }

    pub fn chi(&self) -> Valuation {
        Valuation::basis_element(self.n, MuIndex { k: 0, q: 0 })
    }

    pub fn vol(&self) -> Valuation {
        Valuation::basis_element(self.n, MuIndex { k: 2 * self.n, q: self.n })
    }

    pub fn t(&self) -> Valuation {
        Valuation::from_terms(self.n, [((1, 0), pi_frac(2, 1, -1))])
    }

    pub fn s(&self) -> Valuation {
        Valuation::from_terms(self.n, [((2, 1), pi_frac(1, 1, -1)), ((2, 0), pi_frac(1, 2, -1))])
    }

    /// `u = 4s - t^2 = (2/pi) mu_{2,1}`.
    pub fn u(&self) -> Valuation {
        Valuation::from_terms(self.n, [((2, 1), pi_frac(2, 1, -1))])
    }

    pub fn t_hat(&self) -> Valuation {
        let n = self.n as i64;
        Valuation::from_terms(self.n, [((2 * n - 1, n - 1), pi_frac(2, 1, -1))])
    }

    pub fn s_hat(&self) -> Valuation {
        let n = self.n as i64;
        Valuation::from_terms(
            self.n,
            [((2 * n - 2, n - 1), pi_frac(1, 1, -1)), ((2 * n - 2, n - 2), pi_frac(1, 2, -1))],
        )
    }

    pub fn u_hat(&self) -> Valuation {
        let n = self.n as i64;
        Valuation::from_terms(self.n, [((2 * n - 2, n - 1), pi_frac(2, 1, -1))])
    }

    pub fn mult_s(&self, v: &Valuation) -> Result<Valuation> {
        self.check(v)?;
        Ok(apply_table(&self.s_table, v))
    }

    pub fn mult_t(&self, v: &Valuation) -> Result<Valuation> {
        self.check(v)?;
        Ok(apply_table(&self.t_table, v))
    }

    pub fn hat_t_mult(&self, v: &Valuation) -> Result<Valuation> {
        self.check(v)?;
        Ok(apply_table(&self.hat_t_table, v))
    }

    pub fn hat_s_mult(&self, v: &Valuation) -> Result<Valuation> {
        self.check(v)?;
        Ok(apply_table(&self.hat_s_table, v))
    }

    /// Image of `s^a t^b`.
    pub fn monomial(&self, a: u32, b: u32) -> Valuation {
        let d = 2 * a + b;
        if d > 2 * self.n {
            return Valuation::zero(self.n);
        }
        self.monomials[d as usize][a as usize].clone()
    }

    /// Image of `s_hat^a t_hat^b * vol`.
    pub fn hat_monomial(&self, a: u32, b: u32) -> Valuation {
        let d = 2 * a + b;
        if d > 2 * self.n {
            return Valuation::zero(self.n);
        }
        self.hat_monomials[d as usize][a as usize].clone()
    }

    /// Evaluates a polynomial in `(s,t)` (or `(t,u)`, converted) at the
    /// generators `s`, `t`.
    pub fn from_poly(&self, p: &GradedPoly) -> Valuation {
        let p = p.convert(Coords::St);
        let mut out = Valuation::zero(self.n);
        for ((a, b), c) in p.terms() {
            out = out.try_add(&self.monomial(a, b).scale(c)).unwrap();
        }
        out
    }

    /// `p(s,t) * v` using the multiplication operators directly.
    pub fn apply_poly(&self, p: &GradedPoly, v: &Valuation) -> Result<Valuation> {
        self.check(v)?;
        let p = p.convert(Coords::St);
        let mut out = Valuation::zero(self.n);
        for ((a, b), c) in p.terms() {
            let mut w = v.scale(c);
            for _ in 0..b {
                w = apply_table(&self.t_table, &w);
            }
            for _ in 0..a {
                w = apply_table(&self.s_table, &w);
            }
            out = out.try_add(&w)?;
        }
        Ok(out)
    }

    /// `p(s_hat, t_hat) * v`, where the polynomial's `s` stands for `s_hat`
    /// and `t` for `t_hat`.
    pub fn apply_hat_poly(&self, p: &GradedPoly, v: &Valuation) -> Result<Valuation> {
        self.check(v)?;
        let p = p.convert(Coords::St);
        let mut out = Valuation::zero(self.n);
        for ((a, b), c) in p.terms() {
            let mut w = v.scale(c);
            for _ in 0..b {
                w = apply_table(&self.hat_t_table, &w);
            }
            for _ in 0..a {
                w = apply_table(&self.hat_s_table, &w);
            }
            out = out.try_add(&w)?;
        }
        Ok(out)
    }

    fn section(&self, v: &Valuation, columns: impl Fn(u32) -> (u32, Vec<Valuation>)) -> Result<GradedPoly> {
        self.check(v)?;
        let mut out = GradedPoly::zero(Coords::St);
        for k in v.degrees() {
            let (d, cols) = columns(k);
            let mat = Matrix::from_columns(
                basis(self.n, k).len(),
                &cols.iter().map(|c| c.coords_in_degree(k)).collect::<Vec<_>>(),
            );
            let x = mat.solve(&v.coords_in_degree(k))?;
            for (a, c) in x.into_iter().enumerate() {
                out = &out + &GradedPoly::monomial(Coords::St, a as u32, d - 2 * a as u32, c);
            }
        }
        Ok(out)
    }

    /// A polynomial `p` in `(s,t)` with `from_poly(p) = v`. In each degree
    /// the monomials `s^a t^(d-2a)` are ordered by increasing `a`, and the
    /// echelon solution with all free coefficients zero is returned.
    pub fn to_poly(&self, v: &Valuation) -> Result<GradedPoly> {
        self.section(v, |k| (k, self.monomials[k as usize].clone()))
    }

    /// A polynomial `p` with `p(s_hat, t_hat) * vol = v`, chosen like
    /// [`Self::to_poly`].
    pub fn to_hat_poly(&self, v: &Valuation) -> Result<GradedPoly> {
        let n = self.n;
        self.section(v, |k| (2 * n - k, self.hat_monomials[(2 * n - k) as usize].clone()))
    }

    pub fn product(&self, a: &Valuation, b: &Valuation) -> Result<Valuation> {
        self.check(b)?;
        self.apply_poly(&self.to_poly(a)?, b)
    }

    pub fn convolution(&self, a: &Valuation, b: &Valuation) -> Result<Valuation> {
        self.check(b)?;
        self.apply_hat_poly(&self.to_hat_poly(a)?, b)
    }

    fn top_degree_check(&self, v: &Valuation) -> Result<()> {
        self.check(v)?;
        if v.coeffs.keys().any(|i| i.k != 2 * self.n) {
            return Err(Error::NotTopDegree { expected: 2 * self.n });
        }
        Ok(())
    }

    /// Value on the unit ball of `C^n` of a valuation of degree `2n`, from
    /// the monomial values `s^i t^(2n-2i)(B) = C(2n-2i, n-i)`.
    pub fn eval_ball_top(&self, v: &Valuation) -> Result<PiScalar> {
        self.top_degree_check(v)?;
        let p = self.to_poly(v)?;
        let n = self.n as i64;
        let mut acc = PiScalar::zero();
        for ((a, _), c) in p.terms() {
            let a = a as i64;
            acc += &c.scale(&Rational::from_integer(binomial(2 * n - 2 * a, n - a)));
        }
        Ok(acc)
    }

    /// Same value, read off as the `mu_{2n,n}` coefficient times the volume
    /// `omega_{2n}` of the ball.
    pub fn eval_ball_top_by_volume(&self, v: &Valuation) -> Result<PiScalar> {
        self.top_degree_check(v)?;
        Ok(&v.coefficient(MuIndex { k: 2 * self.n, q: self.n }) * &omega(2 * self.n))
    }

    /// Matrix of a linear operator between the degree blocks `from -> to`.
    pub fn block_matrix<F>(&self, from: u32, to: u32, op: F) -> Matrix
    where
        F: Fn(&Valuation) -> Result<Valuation>,
    {
        let cols: Vec<Vec<PiScalar>> = basis(self.n, from)
            .into_iter()
            .map(|i| op(&Valuation::basis_element(self.n, i)).unwrap().coords_in_degree(to))
            .collect();
        Matrix::from_columns(basis(self.n, to).len(), &cols)
    }
}
