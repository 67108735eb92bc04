//! The module of unitarily invariant area measures on `C^n` over the
//! convolution algebra of valuations.
//!
//! Basis measures are `B_{k,q}` and `Gamma_{k,q}`. The angular recombination
//! `Delta_{k,q}` and its complement `N_{k,q}` are available through
//! [`AreaModule::to_delta_basis`]. All maps are computed from the explicit
//! action of `s_hat` and `t_hat`; a general valuation acts through a
//! polynomial in these two generators.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::poly::{apply_diff, Coords, DiffOp, GradedPoly};
use crate::scalars::{format_combination, int, rat, PiScalar, Rational};
use crate::valalg::{self, fourier, MuIndex, ValAlgebra, Valuation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AreaKind {
    B,
    Gamma,
}

impl AreaKind {
    pub fn name(self) -> &'static str {
        match self {
            AreaKind::B => "B",
            AreaKind::Gamma => "Gamma",
        }
    }
}

/// Index of a basis measure. Field order gives the sort order: by degree,
/// then `B` before `Gamma`, then `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AreaIndex {
    pub k: u32,
    pub kind: AreaKind,
    pub q: u32,
}

impl AreaIndex {
    #[allow(clippy::int_plus_one)]
    pub fn is_valid(n: u32, kind: AreaKind, k: i64, q: i64) -> bool {
        let n = n as i64;
        if !(0..2 * n).contains(&k) || q < 0 {
            return false;
        }
        match kind {
            // exponents n-k+q, k-2q-1, q of theta_0, theta_1, theta_2
            AreaKind::B => n - k + q >= 0 && k - 2 * q - 1 >= 0,
            // exponents n-k+q-1, k-2q, q
            AreaKind::Gamma => n - k + q - 1 >= 0 && k - 2 * q >= 0,
        }
    }

    pub fn checked(n: u32, kind: AreaKind, k: i64, q: i64) -> Option<AreaIndex> {
        Self::is_valid(n, kind, k, q).then_some(AreaIndex { k: k as u32, kind, q: q as u32 })
    }

    pub fn new(n: u32, kind: AreaKind, k: i64, q: i64) -> Result<AreaIndex> {
        Self::checked(n, kind, k, q).ok_or_else(|| {
            let nn = n as i64;
            let why = if !(0..2 * nn).contains(&k) {
                format!("needs 0 <= k <= 2n - 1 = {}", 2 * nn - 1)
            } else if q < 0 {
                "needs q >= 0".to_string()
            } else {
                match kind {
                    AreaKind::B if nn - k + q < 0 => format!("needs q >= k - n = {}", k - nn),
                    AreaKind::B => "needs k - 2q - 1 >= 0".to_string(),
                    AreaKind::Gamma if nn - k + q - 1 < 0 => format!("needs q >= k - n + 1 = {}", k - nn + 1),
                    AreaKind::Gamma => "needs k - 2q >= 0".to_string(),
                }
            };
            Error::InvalidIndex(format!("{}[{k},{q}] for n = {n}: {why}", kind.name()))
        })
    }

    pub fn b(k: u32, q: u32) -> AreaIndex {
        AreaIndex { k, kind: AreaKind::B, q }
    }

    pub fn gamma(k: u32, q: u32) -> AreaIndex {
        AreaIndex { k, kind: AreaKind::Gamma, q }
    }
}

impl fmt::Display for AreaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{},{}]", self.kind.name(), self.k, self.q)
    }
}

fn check_area_degree(n: u32, k: i64) -> Result<()> {
    if (0..2 * n as i64).contains(&k) {
        Ok(())
    } else {
        Err(Error::DegreeOutOfRange { k, max: 2 * n as i64 - 1 })
    }
}

/// Basis of `Area_k`: the valid `B_{k,q}` by increasing `q`, then the valid
/// `Gamma_{k,q}`.
pub fn area_basis_degree(n: u32, k: u32) -> Vec<AreaIndex> {
    let mut out = Vec::new();
    for kind in [AreaKind::B, AreaKind::Gamma] {
        for q in 0..=k / 2 {
            if let Some(i) = AreaIndex::checked(n, kind, k as i64, q as i64) {
                out.push(i);
            }
        }
    }
    out
}

pub fn area_basis(n: u32) -> Vec<AreaIndex> {
    (0..2 * n).flat_map(|k| area_basis_degree(n, k)).collect()
}

pub fn dim_area(n: u32, k: i64) -> Result<usize> {
    check_area_degree(n, k)?;
    Ok(area_basis_degree(n, k as u32).len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AreaMeasure {
    n: u32,
    coeffs: BTreeMap<AreaIndex, PiScalar>,
}

impl AreaMeasure {
    pub fn zero(n: u32) -> Self {
        Self { n, coeffs: BTreeMap::new() }
    }

    pub fn basis_element(n: u32, idx: AreaIndex) -> Self {
        let mut m = Self::zero(n);
        m.coeffs.insert(idx, PiScalar::one());
        m
    }

    pub fn b(n: u32, k: i64, q: i64) -> Result<Self> {
        Ok(Self::basis_element(n, AreaIndex::new(n, AreaKind::B, k, q)?))
    }

    pub fn gamma(n: u32, k: i64, q: i64) -> Result<Self> {
        Ok(Self::basis_element(n, AreaIndex::new(n, AreaKind::Gamma, k, q)?))
    }

    /// Builds a measure from `(kind, k, q, coefficient)` terms, dropping
    /// invalid indices.
    pub fn from_terms<I>(n: u32, it: I) -> Self
    where
        I: IntoIterator<Item = (AreaKind, i64, i64, PiScalar)>,
    {
        let mut m = Self::zero(n);
        for (kind, k, q, c) in it {
            if let Some(idx) = AreaIndex::checked(n, kind, k, q) {
                m.add_term(idx, &c);
            }
        }
        m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (AreaIndex, &PiScalar)> + '_ {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn coefficient(&self, idx: AreaIndex) -> PiScalar {
        self.coeffs.get(&idx).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, idx: AreaIndex, c: &PiScalar) {
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

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        let mut out = self.clone();
        for (i, c) in &other.coeffs {
            out.add_term(*i, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(&PiScalar::from_int(-1)))
    }

    pub fn component(&self, k: u32) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().filter(|(i, _)| i.k == k).map(|(i, c)| (*i, c.clone())).collect(),
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut ds: Vec<u32> = self.coeffs.keys().map(|i| i.k).collect();
        ds.dedup();
        ds
    }

    /// Drops all `Gamma` terms.
    pub fn b_part(&self) -> Self {
        Self {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(i, _)| i.kind == AreaKind::B)
                .map(|(i, c)| (*i, c.clone()))
                .collect(),
        }
    }

    pub fn coords_in_degree(&self, k: u32) -> Vec<PiScalar> {
        area_basis_degree(self.n, k).into_iter().map(|i| self.coefficient(i)).collect()
    }

    pub fn from_coords(n: u32, k: u32, xs: &[PiScalar]) -> Self {
        let mut m = Self::zero(n);
        for (i, x) in area_basis_degree(n, k).into_iter().zip(xs) {
            m.add_term(i, x);
        }
        m
    }

    pub fn map_basis<F: FnMut(AreaIndex) -> AreaMeasure>(&self, mut f: F) -> AreaMeasure {
        let mut out = AreaMeasure::zero(self.n);
        for (i, c) in &self.coeffs {
            for (j, d) in &f(*i).coeffs {
                out.add_term(*j, &(c * d));
            }
        }
        out
    }

    pub fn to_json(&self) -> AreaMeasureJson {
        AreaMeasureJson {
            coeffs: self
                .coeffs
                .iter()
                .map(|(i, c)| (format!("{}_{}_{}", i.kind.name(), i.k, i.q), c.clone()))
                .collect(),
            n: self.n,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AreaMeasureJson {
    pub coeffs: BTreeMap<String, PiScalar>,
    pub n: u32,
}

impl fmt::Display for AreaMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(self.coeffs.iter().map(|(i, c)| (c, i.to_string()))))
    }
}

/// Labels of the angular basis: `Delta_{k,q}` for every valid `mu_{k,q}`
/// with `k < 2n`, and `N_{k,q}` where both `B_{k,q}` and `Gamma_{k,q}` exist.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum DeltaKind {
    Delta,
    N,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DeltaIndex {
    pub k: u32,
    pub kind: DeltaKind,
    pub q: u32,
}

impl fmt::Display for DeltaIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            DeltaKind::Delta => "Delta",
            DeltaKind::N => "N",
        };
        write!(f, "{name}[{},{}]", self.k, self.q)
    }
}

/// A measure written in the `Delta`/`N` basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DeltaCoords(pub BTreeMap<DeltaIndex, PiScalar>);

impl DeltaCoords {
    pub fn get(&self, idx: DeltaIndex) -> PiScalar {
        self.0.get(&idx).cloned().unwrap_or_default()
    }

    pub fn has_null_part(&self) -> bool {
        self.0.keys().any(|i| i.kind == DeltaKind::N)
    }
}

impl fmt::Display for DeltaCoords {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_combination(self.0.iter().map(|(i, c)| (c, i.to_string()))))
    }
}

/// `(k-2q)/(2n-k)` and `2(n-k+q)/(2n-k)`, the `B` and `Gamma` weights of `Delta_{k,q}`.
fn delta_weights(n: u32, k: u32, q: u32) -> (Rational, Rational) {
    let (n, k, q) = (n as i64, k as i64, q as i64);
    (rat(k - 2 * q, 2 * n - k), rat(2 * (n - k + q), 2 * n - k))
}

/// Per-`n` action tables.
#[derive(Debug)]
pub struct AreaModule {
    n: u32,
    val: Arc<ValAlgebra>,
    hat_t_table: BTreeMap<AreaIndex, AreaMeasure>,
    hat_s_table: BTreeMap<AreaIndex, AreaMeasure>,
}

fn cache() -> &'static Mutex<BTreeMap<u32, Arc<AreaModule>>> {
    static CACHE: OnceLock<Mutex<BTreeMap<u32, Arc<AreaModule>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// `t_hat * B_{k,q}` or `t_hat * Gamma_{k,q}`.
pub fn hat_t_on_basis(n: u32, idx: AreaIndex) -> AreaMeasure {
    if idx.k == 0 {
        return AreaMeasure::zero(n);
    }
    let pre = valalg::hat_t_prefactor(n, idx.k);
    let (nn, k, q) = (n as i64, idx.k as i64, idx.q as i64);
    let c = |r: Rational| pre.scale(&r);
    let terms = match idx.kind {
        AreaKind::B => vec![
            (AreaKind::B, k - 1, q - 1, c(int(k - 2 * q + 1))),
            (AreaKind::B, k - 1, q, c(rat(2 * (nn - k + q + 1) * (k - 2 * q - 1), k - 2 * q))),
            (AreaKind::Gamma, k - 1, q, c(rat(2 * (nn - k + q + 1), k - 2 * q))),
        ],
        AreaKind::Gamma => vec![
            (AreaKind::Gamma, k - 1, q - 1, c(int(k - 2 * q + 1))),
            (AreaKind::Gamma, k - 1, q, c(int(2 * (nn - k + q + 1)))),
        ],
    };
    AreaMeasure::from_terms(n, terms)
}

/// `s_hat * B_{k,q}` or `s_hat * Gamma_{k,q}`; both kinds use the
/// coefficients of `s_hat * mu_{k,q}`.
pub fn hat_s_on_basis(n: u32, idx: AreaIndex) -> AreaMeasure {
    let glob = valalg::hat_s_times_mu(n, MuIndex { k: idx.k, q: idx.q });
    AreaMeasure::from_terms(
        n,
        glob.terms().map(|(i, c)| (idx.kind, i.k as i64, i.q as i64, c.clone())),
    )
}

/// Result of one per-degree presentation comparison.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationDegree {
    /// Degree `d` of `p`; `q` has degree `d - 1`.
    pub d: u32,
    pub kernel_dim: usize,
    pub ideal_dim: usize,
    pub joint_rank: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresentationReport {
    pub n: u32,
    pub degrees: Vec<PresentationDegree>,
}

impl PresentationReport {
    pub fn passed(&self) -> bool {
        self.degrees.iter().all(|d| d.equal)
    }
}

/// Ranks behind the decomposition `Area_{2n-k-1} = b_k + g_{k-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionDegree {
    pub k: u32,
    pub area_dim: usize,
    pub b_dim: usize,
    pub g_dim: usize,
    pub intersection_dim: usize,
    pub expected_intersection: usize,
    pub spans: bool,
}

impl DecompositionDegree {
    pub fn passed(&self) -> bool {
        self.spans && self.intersection_dim == self.expected_intersection
    }
}

fn dim_val(n: u32, k: i64) -> usize {
    valalg::dim_val(n, k).unwrap_or(0)
}

impl AreaModule {
    pub fn get(n: u32) -> Result<Arc<AreaModule>> {
        let val = ValAlgebra::get(n)?;
        if let Some(m) = cache().lock().unwrap().get(&n) {
            return Ok(m.clone());
        }
        let all = area_basis(n);
        let built = Arc::new(AreaModule {
            n,
            val,
            hat_t_table: all.iter().map(|&i| (i, hat_t_on_basis(n, i))).collect(),
            hat_s_table: all.iter().map(|&i| (i, hat_s_on_basis(n, i))).collect(),
        });
        Ok(cache().lock().unwrap().entry(n).or_insert(built).clone())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn val(&self) -> &ValAlgebra {
        &self.val
    }

    fn check(&self, m: &AreaMeasure) -> Result<()> {
        if m.n != self.n {
            return Err(Error::DimensionMismatch(m.n, self.n));
        }
        Ok(())
    }

    fn check_val(&self, v: &Valuation) -> Result<()> {
        if v.n() != self.n {
            return Err(Error::DimensionMismatch(v.n(), self.n));
        }
        Ok(())
    }

    pub fn hat_t_table(&self) -> &BTreeMap<AreaIndex, AreaMeasure> {
        &self.hat_t_table
    }

    pub fn hat_s_table(&self) -> &BTreeMap<AreaIndex, AreaMeasure> {
        &self.hat_s_table
    }

    pub fn hat_t_act(&self, m: &AreaMeasure) -> Result<AreaMeasure> {
        self.check(m)?;
        Ok(m.map_basis(|i| self.hat_t_table[&i].clone()))
    }

    pub fn hat_s_act(&self, m: &AreaMeasure) -> Result<AreaMeasure> {
        self.check(m)?;
        Ok(m.map_basis(|i| self.hat_s_table[&i].clone()))
    }

    /// `p(s_hat, t_hat) * m`, reading the polynomial's `s` as `s_hat` and `t` as `t_hat`.
    pub fn apply_hat_poly(&self, p: &GradedPoly, m: &AreaMeasure) -> Result<AreaMeasure> {
        self.check(m)?;
        let p = p.convert(Coords::St);
        let mut out = AreaMeasure::zero(self.n);
        for ((a, b), c) in p.terms() {
            let mut w = m.scale(c);
            for _ in 0..b {
                w = self.hat_t_act(&w)?;
            }
            for _ in 0..a {
                w = self.hat_s_act(&w)?;
            }
            out = out.try_add(&w)?;
        }
        Ok(out)
    }

    /// Convolution `phi * m`.
    pub fn act(&self, phi: &Valuation, m: &AreaMeasure) -> Result<AreaMeasure> {
        self.check_val(phi)?;
        let sigma = self.val.to_poly(&fourier(phi))?;
        self.apply_hat_poly(&sigma, m)
    }

    /// Total mass: `B_{k,q}` and `Gamma_{k,q}` both go to `mu_{k,q}`.
    pub fn glob(&self, m: &AreaMeasure) -> Result<Valuation> {
        self.check(m)?;
        Ok(Valuation::from_terms(self.n, m.terms().map(|(i, c)| ((i.k as i64, i.q as i64), c.clone()))))
    }

    /// `B_{2n-1,n-1}`.
    pub fn top_b(&self) -> AreaMeasure {
        AreaMeasure::basis_element(self.n, AreaIndex::b(2 * self.n - 1, self.n - 1))
    }

    /// `Gamma_{2n-2,n-1}`.
    pub fn top_gamma(&self) -> AreaMeasure {
        AreaMeasure::basis_element(self.n, AreaIndex::gamma(2 * self.n - 2, self.n - 1))
    }

    /// First variation `delta(phi) = phi * S_{2n-1}` with `S_{2n-1} = 2 B_{2n-1,n-1}`.
    pub fn delta_map(&self, phi: &Valuation) -> Result<AreaMeasure> {
        self.act(phi, &self.top_b().scale_rational(&int(2)))
    }

    /// `b(phi) = F(phi) * B_{2n-1,n-1}`.
    pub fn frak_b(&self, phi: &Valuation) -> Result<AreaMeasure> {
        self.check_val(phi)?;
        self.apply_hat_poly(&self.val.to_poly(phi)?, &self.top_b())
    }

    /// `g(phi) = F(phi) * Gamma_{2n-2,n-1}`.
    pub fn frak_g(&self, phi: &Valuation) -> Result<AreaMeasure> {
        self.check_val(phi)?;
        self.apply_hat_poly(&self.val.to_poly(phi)?, &self.top_gamma())
    }

    pub fn frak_b_poly(&self, p: &GradedPoly) -> Result<AreaMeasure> {
        self.frak_b(&self.val.from_poly(p))
    }

    pub fn frak_g_poly(&self, p: &GradedPoly) -> Result<AreaMeasure> {
        self.frak_g(&self.val.from_poly(p))
    }

    pub fn delta_measure(&self, k: u32, q: u32) -> Result<AreaMeasure> {
        MuIndex::new(self.n, k as i64, q as i64)?;
        check_area_degree(self.n, k as i64)?;
        let (a, b) = delta_weights(self.n, k, q);
        Ok(AreaMeasure::from_terms(
            self.n,
            [
                (AreaKind::B, k as i64, q as i64, a.into()),
                (AreaKind::Gamma, k as i64, q as i64, b.into()),
            ],
        ))
    }

    /// `N_{k,q} = Delta_{k,q} - B_{k,q}`; only defined where both `B_{k,q}`
    /// and `Gamma_{k,q}` exist.
    pub fn null_measure(&self, k: u32, q: u32) -> Result<AreaMeasure> {
        let idx_b = AreaIndex::new(self.n, AreaKind::B, k as i64, q as i64)?;
        AreaIndex::new(self.n, AreaKind::Gamma, k as i64, q as i64)?;
        self.delta_measure(k, q)?.try_sub(&AreaMeasure::basis_element(self.n, idx_b))
    }

    /// Indices of the `Delta`/`N` basis in degree `k`.
    pub fn delta_basis_degree(&self, k: u32) -> Vec<DeltaIndex> {
        let n = self.n;
        let mut out: Vec<DeltaIndex> =
            valalg::basis(n, k).into_iter().map(|i| DeltaIndex { k, kind: DeltaKind::Delta, q: i.q }).collect();
        for i in valalg::basis(n, k) {
            let both = AreaIndex::is_valid(n, AreaKind::B, k as i64, i.q as i64)
                && AreaIndex::is_valid(n, AreaKind::Gamma, k as i64, i.q as i64);
            if both {
                out.push(DeltaIndex { k, kind: DeltaKind::N, q: i.q });
            }
        }
        out
    }

    pub fn angular_basis(&self) -> Vec<AreaMeasure> {
        (0..2 * self.n)
            .flat_map(|k| valalg::basis(self.n, k).into_iter().map(move |i| (k, i.q)))
            .map(|(k, q)| self.delta_measure(k, q).expect("valid index"))
            .collect()
    }

    pub fn to_delta_basis(&self, m: &AreaMeasure) -> Result<DeltaCoords> {
        self.check(m)?;
        let n = self.n;
        let mut out = DeltaCoords::default();
        let mut put = |idx: DeltaIndex, c: PiScalar| {
            if !c.is_zero() {
                out.0.insert(idx, c);
            }
        };
        let pairs: std::collections::BTreeSet<(u32, u32)> = m.terms().map(|(i, _)| (i.k, i.q)).collect();
        for (k, q) in pairs {
            let x = m.coefficient(AreaIndex::b(k, q));
            let y = m.coefficient(AreaIndex::gamma(k, q));
            let has_b = AreaIndex::is_valid(n, AreaKind::B, k as i64, q as i64);
            let has_g = AreaIndex::is_valid(n, AreaKind::Gamma, k as i64, q as i64);
            let delta = DeltaIndex { k, kind: DeltaKind::Delta, q };
            if has_b && has_g {
                // xB + yG = (x+y) Delta + (y/b - x - y) N
                let (_, b) = delta_weights(n, k, q);
                let sum = &x + &y;
                let null = &y.scale(&b.recip()) - &sum;
                put(delta, sum);
                put(DeltaIndex { k, kind: DeltaKind::N, q }, null);
            } else {
                put(delta, &x + &y);
            }
        }
        Ok(out)
    }

    pub fn from_delta_basis(&self, d: &DeltaCoords) -> Result<AreaMeasure> {
        let mut out = AreaMeasure::zero(self.n);
        for (i, c) in &d.0 {
            let m = match i.kind {
                DeltaKind::Delta => self.delta_measure(i.k, i.q)?,
                DeltaKind::N => self.null_measure(i.k, i.q)?,
            };
            out = out.try_add(&m.scale(c))?;
        }
        Ok(out)
    }

    pub fn is_angular(&self, m: &AreaMeasure) -> Result<bool> {
        Ok(!self.to_delta_basis(m)?.has_null_part())
    }

    /// Columns `delta(mu_{k+1,q})` in the basis of `Area_k`.
    fn delta_image_matrix(&self, k: u32) -> Matrix {
        let cols: Vec<Vec<PiScalar>> = valalg::basis(self.n, k + 1)
            .into_iter()
            .map(|i| {
                self.delta_map(&Valuation::basis_element(self.n, i)).unwrap().coords_in_degree(k)
            })
            .collect();
        Matrix::from_columns(area_basis_degree(self.n, k).len(), &cols)
    }

    fn angular_matrix(&self, k: u32) -> Matrix {
        let cols: Vec<Vec<PiScalar>> = valalg::basis(self.n, k)
            .into_iter()
            .map(|i| self.delta_measure(k, i.q).unwrap().coords_in_degree(k))
            .collect();
        Matrix::from_columns(area_basis_degree(self.n, k).len(), &cols)
    }

    /// Whether `m` is a first variation, i.e. lies in the image of [`Self::delta_map`].
    pub fn in_centroid_kernel(&self, m: &AreaMeasure) -> Result<bool> {
        self.check(m)?;
        for k in m.degrees() {
            if !self.delta_image_matrix(k).spans(&m.coords_in_degree(k)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn delta_image_rank(&self, k: u32) -> usize {
        self.delta_image_matrix(k).rank()
    }

    /// Dimension of `angular ∩ image(delta)` in degree `k`.
    pub fn angular_first_variation_dim(&self, k: u32) -> Result<usize> {
        self.angular_matrix(k).intersection_dim(&self.delta_image_matrix(k))
    }

    /// The degree-`k` measure that is both angular and a first variation,
    /// scaled so that its `Delta_{k,q}` coefficient of largest `q` is 1.
    pub fn classical_delta(&self, k: u32) -> Result<AreaMeasure> {
        check_area_degree(self.n, k as i64)?;
        let ang = self.angular_matrix(k);
        let dim = ang.intersection_dim(&self.delta_image_matrix(k))?;
        if dim != 1 {
            return Err(Error::NotOneDimensional { k, dim });
        }
        let joint = ang.hstack(&self.delta_image_matrix(k))?;
        let deltas = valalg::basis(self.n, k);
        for v in joint.nullspace() {
            let x = &v[..ang.cols()];
            if x.iter().all(PiScalar::is_zero) {
                continue;
            }
            let lead = x.iter().rev().find(|c| !c.is_zero()).unwrap().clone();
            let mut out = AreaMeasure::zero(self.n);
            for (i, c) in deltas.iter().zip(x) {
                let c = c.div_exact(&lead)?;
                out = out.try_add(&self.delta_measure(k, i.q)?.scale(&c))?;
            }
            return Ok(out);
        }
        Err(Error::NotOneDimensional { k, dim: 0 })
    }

    /// `A(p,q) = b([t d/dt + 1] p) + g(2t d/du [t d/dt + 2u d/du + 2] p + q)`
    /// for `p` in `R[t,u]` and `q` in `R[u]`.
    pub fn a_operator(&self, p: &GradedPoly, q: &GradedPoly) -> Result<AreaMeasure> {
        let p = p.convert(Coords::Tu);
        let q = q.convert(Coords::Tu);
        if let Some(((a, b), _)) = q.terms().find(|((_, b), _)| *b != 0) {
            return Err(Error::MalformedUPoly(format!("term u^{a} t^{b} in {q}")));
        }
        let first = &apply_diff(DiffOp::TDt, &p)? + &p;
        let inner = crate::poly::angularity_lhs(&p)?;
        let second = &GradedPoly::t(Coords::Tu).try_mul(&inner)?.scale_rational(&int(2)) + &q;
        self.frak_b_poly(&first)?.try_add(&self.frak_g_poly(&second)?)
    }

    /// Whether the images of `A` on all inputs of matching degree span the
    /// angular subspace of `Area_k`.
    pub fn a_operator_spans_angular(&self, k: u32) -> Result<bool> {
        let n = self.n;
        check_area_degree(n, k as i64)?;
        let d = 2 * n - k - 1;
        let mut cols = Vec::new();
        for i in 0..=d / 2 {
            let p = GradedPoly::monomial(Coords::Tu, i, d - 2 * i, PiScalar::one());
            cols.push(self.a_operator(&p, &GradedPoly::zero(Coords::Tu))?.coords_in_degree(k));
        }
        if 2 * n >= k + 2 && (2 * n - k - 2).is_multiple_of(2) {
            let i = (2 * n - k - 2) / 2;
            let q = GradedPoly::monomial(Coords::Tu, i, 0, PiScalar::one());
            cols.push(self.a_operator(&GradedPoly::zero(Coords::Tu), &q)?.coords_in_degree(k));
        }
        let img = Matrix::from_columns(area_basis_degree(n, k).len(), &cols);
        img.same_span(&self.angular_matrix(k))
    }

    /// Matrix of `h(p,q) = b(p) + g(q)` on `Val_d ⊕ Val_{d-1}`, with rows the
    /// basis of `Area_{2n-d-1}` (possibly empty).
    fn h_matrix(&self, d: u32) -> Matrix {
        let n = self.n;
        let target = (2 * n as i64) - d as i64 - 1;
        let rows = if target >= 0 { area_basis_degree(n, target as u32).len() } else { 0 };
        let coords = |m: AreaMeasure| if target >= 0 { m.coords_in_degree(target as u32) } else { vec![] };
        let mut cols = Vec::new();
        for i in self.val_basis(d as i64) {
            cols.push(coords(self.frak_b(&Valuation::basis_element(n, i)).unwrap()));
        }
        for i in self.val_basis(d as i64 - 1) {
            cols.push(coords(self.frak_g(&Valuation::basis_element(n, i)).unwrap()));
        }
        Matrix::from_columns(rows, &cols)
    }

    fn val_basis(&self, k: i64) -> Vec<MuIndex> {
        if (0..=2 * self.n as i64).contains(&k) {
            valalg::basis(self.n, k as u32)
        } else {
            Vec::new()
        }
    }

    fn pair_coords(&self, d: u32, p: &Valuation, q: &Valuation) -> Vec<PiScalar> {
        let mut out: Vec<PiScalar> = self.val_basis(d as i64).into_iter().map(|i| p.coefficient(i)).collect();
        out.extend(self.val_basis(d as i64 - 1).into_iter().map(|i| q.coefficient(i)));
        out
    }

    /// Degree-`d` slice of the submodule generated by `(p_n, -q_{n-1})` and `(0, p_n)`.
    fn ideal_matrix(&self, d: u32) -> Matrix {
        let n = self.n;
        let pn = self.val.from_poly(&crate::poly::poly_p(n, Coords::St));
        let qn1 = self.val.from_poly(&crate::poly::poly_q(n - 1, Coords::St));
        let mut cols = Vec::new();
        for i in self.val_basis(d as i64 - n as i64) {
            let b = Valuation::basis_element(n, i);
            let p = self.val.product(&b, &pn).unwrap();
            let q = self.val.product(&b, &qn1).unwrap().scale(&PiScalar::from_int(-1));
            cols.push(self.pair_coords(d, &p, &q));
        }
        for i in self.val_basis(d as i64 - n as i64 - 1) {
            let b = Valuation::basis_element(n, i);
            let q = self.val.product(&b, &pn).unwrap();
            cols.push(self.pair_coords(d, &Valuation::zero(n), &q));
        }
        let rows = self.val_basis(d as i64).len() + self.val_basis(d as i64 - 1).len();
        Matrix::from_columns(rows, &cols)
    }

    /// Compares `ker h` with the ideal slice in every degree `0..=2n+1`.
    pub fn presentation_check(&self) -> PresentationReport {
        let degrees = (0..=2 * self.n + 1)
            .map(|d| {
                let h = self.h_matrix(d);
                let kernel = Matrix::from_columns(h.cols(), &h.nullspace());
                let ideal = self.ideal_matrix(d);
                let kernel_dim = kernel.rank();
                let ideal_dim = ideal.rank();
                let joint_rank = kernel.hstack(&ideal).unwrap().rank();
                PresentationDegree {
                    d,
                    kernel_dim,
                    ideal_dim,
                    joint_rank,
                    equal: kernel_dim == ideal_dim && joint_rank == kernel_dim,
                }
            })
            .collect();
        PresentationReport { n: self.n, degrees }
    }

    fn image_matrix<F>(&self, from: u32, to: u32, f: F) -> Matrix
    where
        F: Fn(&Valuation) -> Result<AreaMeasure>,
    {
        let cols: Vec<Vec<PiScalar>> = valalg::basis(self.n, from)
            .into_iter()
            .map(|i| f(&Valuation::basis_element(self.n, i)).unwrap().coords_in_degree(to))
            .collect();
        Matrix::from_columns(area_basis_degree(self.n, to).len(), &cols)
    }

    /// `b_k = b(Val_k)` and `g_{k-1}` inside `Area_{2n-k-1}` for `1 <= k < 2n`.
    pub fn decomposition(&self, k: u32) -> DecompositionDegree {
        let n = self.n;
        let target = 2 * n - k - 1;
        let bm = self.image_matrix(k, target, |v| self.frak_b(v));
        let gm = self.image_matrix(k - 1, target, |v| self.frak_g(v));
        let area_dim = area_basis_degree(n, target).len();
        let joint = bm.hstack(&gm).unwrap().rank();
        let (b_dim, g_dim) = (bm.rank(), gm.rank());
        DecompositionDegree {
            k,
            area_dim,
            b_dim,
            g_dim,
            intersection_dim: b_dim + g_dim - joint,
            expected_intersection: usize::from(k >= n),
            spans: joint == area_dim,
        }
    }

    /// Checks that `g(Val_k)` equals the span of the `Gamma` measures in
    /// `Area_{2n-k-2}` and has the expected dimension. Returns the rank.
    pub fn g_image_is_gamma_span(&self, k: u32) -> (bool, usize) {
        let n = self.n;
        let target = 2 * n - k - 2;
        let gm = self.image_matrix(k, target, |v| self.frak_g(v));
        let gammas: Vec<Vec<PiScalar>> = area_basis_degree(n, target)
            .into_iter()
            .filter(|i| i.kind == AreaKind::Gamma)
            .map(|i| AreaMeasure::basis_element(n, i).coords_in_degree(target))
            .collect();
        let span = Matrix::from_columns(area_basis_degree(n, target).len(), &gammas);
        let expected = if k < n { dim_val(n, k as i64) } else { dim_val(n, k as i64) - 1 };
        let rank = gm.rank();
        (gm.same_span(&span).unwrap() && rank == expected, rank)
    }

    /// Printed value of `b(u^i)`.
    pub fn magic_b_expected(&self, i: u32) -> AreaMeasure {
        let n = self.n as i64;
        let i = i as i64;
        let pre = PiScalar::monomial(
            Rational::from_integer(crate::scalars::factorial(i as u64) * (num_bigint::BigInt::from(4).pow(i as u32))),
            -(i as i32),
        );
        let k = 2 * n - 2 * i - 1;
        let q = n - i - 1;
        AreaMeasure::from_terms(
            self.n,
            [
                (AreaKind::B, k, q, pre.clone()),
                (AreaKind::Gamma, k, q, pre.scale(&rat(-2 * i, 2 * i + 1))),
            ],
        )
    }

    /// The constant `c` with `g(u^i) = c Delta_{2(n-i-1), n-i-1}`, if
    /// `g(u^i)` is such a multiple.
    pub fn magic_g_constant(&self, i: u32) -> Result<Option<PiScalar>> {
        let n = self.n;
        let g = self.frak_g_poly(&GradedPoly::u().pow(i))?;
        let k = 2 * (n - i - 1);
        let delta = self.delta_measure(k, n - i - 1)?;
        let idx = AreaIndex::gamma(k, n - i - 1);
        let c = g.coefficient(idx);
        let scale = delta.coefficient(idx);
        let c = c.div_exact(&scale)?;
        Ok((delta.scale(&c) == g).then_some(c))
    }

    /// `(2i+1)! / (i! pi^i)`, the value of [`Self::magic_g_constant`] for every `n > i`.
    pub fn magic_g_closed_constant(i: u32) -> PiScalar {
        let c = Rational::new(crate::scalars::factorial(2 * i as u64 + 1), crate::scalars::factorial(i as u64));
        PiScalar::monomial(c, -(i as i32))
    }

    /// Right side of the `t^{2j} u^i` formula for `b`, modulo `Gamma`.
    pub fn magic_b_mod_gamma_expected(&self, i: u32, j: u32) -> AreaMeasure {
        let n = self.n as i64;
        let (i, j) = (i as i64, j as i64);
        let pre = PiScalar::monomial(
            Rational::from_integer(
                crate::scalars::factorial((i + j) as u64) * num_bigint::BigInt::from(4).pow((i + j) as u32),
            ),
            -((i + j) as i32),
        );
        let deg = 2 * (n - i - j) - 1;
        let terms = (0..=j.min(n - i - j - 1)).map(|k| {
            let c = Rational::from_integer(crate::scalars::binomial(i + j - k, i) * (2 * k + 1));
            (AreaKind::B, deg, n - i - j - k - 1, pre.scale(&c))
        });
        AreaMeasure::from_terms(self.n, terms)
    }

    /// Left side `C(2i+2j+1, 2j) b(t^{2j} u^i)`.
    pub fn magic_b_mod_gamma_actual(&self, i: u32, j: u32) -> Result<AreaMeasure> {
        let p = GradedPoly::t(Coords::Tu).pow(2 * j).try_mul(&GradedPoly::u().pow(i))?;
        let c = crate::scalars::binomial((2 * i + 2 * j + 1) as i64, (2 * j) as i64);
        Ok(self.frak_b_poly(&p)?.scale_rational(&Rational::from_integer(c)))
    }

    /// Printed `c_{im} = (2i+1) pi^{i+m} / (4^{i+m} (i+m)!) C(2i+2m+1, 2m)`.
    pub fn c_im(i: u32, m: u32) -> PiScalar {
        let s = i + m;
        let num = crate::scalars::binomial((2 * i + 2 * m + 1) as i64, (2 * m) as i64) * (2 * i as i64 + 1);
        let den = crate::scalars::factorial(s as u64) * num_bigint::BigInt::from(4).pow(s);
        PiScalar::monomial(Rational::new(num, den), s as i32)
    }

    /// The `Delta`/`N` expansions claimed for `c_{im} b(t^{2m} u^i)` and
    /// `c_{im} g(t^{2m+1} u^{i-1})`.
    pub fn c_im_expected(&self, i: u32, m: u32) -> (DeltaCoords, DeltaCoords) {
        let n = self.n as i64;
        let (i, m) = (i as i64, m as i64);
        let k = (2 * (n - i - m) - 1) as u32;
        let mut b = DeltaCoords::default();
        let mut g = DeltaCoords::default();
        let add = |d: &mut DeltaCoords, idx: DeltaIndex, c: Rational| {
            if idx.kind == DeltaKind::N && !self.delta_basis_degree(idx.k).contains(&idx) {
                return;
            }
            let slot = d.0.entry(idx).or_default();
            *slot += &PiScalar::from_rational(c);
            if slot.is_zero() {
                d.0.remove(&idx);
            }
        };
        for kk in 0..=m.min(n - i - m - 1) {
            let q = (n - i - m - kk - 1) as u32;
            let delta = DeltaIndex { k, kind: DeltaKind::Delta, q };
            let null = DeltaIndex { k, kind: DeltaKind::N, q };
            let cd = Rational::from_integer(crate::scalars::binomial(i + m - kk, i) * (2 * m + 1));
            let cn = Rational::from_integer(crate::scalars::binomial(m + i - 1 - kk, i - 1) * (2 * kk + 1));
            add(&mut b, delta, cd.clone());
            add(&mut b, null, -cn.clone() * int(2 * (i + m + 1)));
            add(&mut g, delta, cd);
            add(&mut g, null, cn * rat(2 * m + 1, 2 * i));
        }
        (b, g)
    }

    /// Actual `Delta`/`N` expansions of `c_{im} b(t^{2m} u^i)` and `c_{im} g(t^{2m+1} u^{i-1})`.
    pub fn c_im_actual(&self, i: u32, m: u32) -> Result<(DeltaCoords, DeltaCoords)> {
        let c = Self::c_im(i, m);
        let t = GradedPoly::t(Coords::Tu);
        let u = GradedPoly::u();
        let b = self.frak_b_poly(&t.pow(2 * m).try_mul(&u.pow(i))?)?.scale(&c);
        let g = self.frak_g_poly(&t.pow(2 * m + 1).try_mul(&u.pow(i - 1))?)?.scale(&c);
        Ok((self.to_delta_basis(&b)?, self.to_delta_basis(&g)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{fu_f, poly_p, poly_q};
    use crate::scalars::omega;

    fn module(n: u32) -> Arc<AreaModule> {
        AreaModule::get(n).unwrap()
    }

    fn pi_frac(num: i64, den: i64, p: i32) -> PiScalar {
        PiScalar::monomial(rat(num, den), p)
    }

    #[test]
    fn basis_examples() {
        let names: Vec<String> = {
            let mut b = area_basis(2);
            b.sort_by_key(|i| (i.kind, i.k, i.q));
            b.iter().map(ToString::to_string).collect()
        };
        assert_eq!(names, ["B[1,0]", "B[2,0]", "B[3,1]", "Gamma[0,0]", "Gamma[1,0]", "Gamma[2,1]"]);
        assert_eq!(dim_area(2, 1).unwrap(), 2);
        for n in 1..=6 {
            assert_eq!(dim_area(n, 0).unwrap(), 1);
            for k in 0..2 * n as i64 {
                let expected = dim_val(n, k) + dim_val(n, k + 1) - 1;
                assert_eq!(dim_area(n, k).unwrap(), expected, "n = {n}, k = {k}");
            }
            assert_eq!(area_basis(n).len() as u32, n * n + n);
        }
        assert!(dim_area(2, 4).is_err());
    }

    #[test]
    fn hat_t_examples() {
        let m = module(2);
        let g21 = AreaMeasure::gamma(2, 2, 1).unwrap();
        assert_eq!(m.hat_t_act(&g21).unwrap(), AreaMeasure::gamma(2, 1, 0).unwrap().scale(&pi_frac(4, 3, -1)));
        assert!(m.hat_t_act(&AreaMeasure::gamma(2, 0, 0).unwrap()).unwrap().is_zero());
        let b31 = AreaMeasure::b(2, 3, 1).unwrap();
        let expected = AreaMeasure::b(2, 2, 0).unwrap().try_add(&g21).unwrap();
        assert_eq!(m.hat_t_act(&b31).unwrap(), expected);
    }

    #[test]
    fn hat_s_examples() {
        let m = module(2);
        let b31 = AreaMeasure::b(2, 3, 1).unwrap();
        assert_eq!(m.hat_s_act(&b31).unwrap(), AreaMeasure::b(2, 1, 0).unwrap().scale(&pi_frac(4, 3, -1)));
        assert!(m.hat_s_act(&AreaMeasure::gamma(2, 0, 0).unwrap()).unwrap().is_zero());
        // only the second term survives: 2*2*2/(4 pi)
        let g21 = AreaMeasure::gamma(2, 2, 1).unwrap();
        assert_eq!(m.hat_s_act(&g21).unwrap(), AreaMeasure::gamma(2, 0, 0).unwrap().scale(&pi_frac(2, 1, -1)));
    }

    #[test]
    fn hat_t_on_null_measures() {
        for n in 1..=5 {
            let m = module(n);
            for k in 1..2 * n {
                for i in m.delta_basis_degree(k).into_iter().filter(|i| i.kind == DeltaKind::N) {
                    let q = i.q as i64;
                    let (nn, kk) = (n as i64, k as i64);
                    let pre = valalg::hat_t_prefactor(n, k).scale(&rat(2 * nn - kk + 1, 2 * nn - kk));
                    let mut expected = AreaMeasure::zero(n);
                    let targets = [
                        (q - 1, int(kk - 2 * q + 1)),
                        (q, rat(2 * (nn - kk + q) * (kk - 2 * q - 1), kk - 2 * q)),
                    ];
                    for (tq, c) in targets {
                        if let Ok(nm) = m.null_measure(k - 1, tq.max(0) as u32) {
                            if tq >= 0 {
                                expected = expected.try_add(&nm.scale(&pre.scale(&c))).unwrap();
                            }
                        }
                    }
                    let got = m.hat_t_act(&m.null_measure(k, i.q).unwrap()).unwrap();
                    assert_eq!(got, expected, "n = {n}, N[{k},{q}]");
                }
            }
        }
    }

    #[test]
    fn act_examples() {
        for n in 1..=4 {
            let m = module(n);
            let val = m.val();
            for i in area_basis(n) {
                let x = AreaMeasure::basis_element(n, i);
                assert_eq!(m.act(&val.vol(), &x).unwrap(), x);
                assert_eq!(m.act(&val.t_hat(), &x).unwrap(), m.hat_t_act(&x).unwrap());
                assert_eq!(m.act(&val.s_hat(), &x).unwrap(), m.hat_s_act(&x).unwrap());
                for f in [fu_f(n + 1, Coords::St), fu_f(n + 2, Coords::St)] {
                    assert!(m.apply_hat_poly(&f, &x).unwrap().is_zero(), "n = {n}, {i}");
                }
            }
        }
    }

    #[test]
    fn hat_actions_commute() {
        for n in 1..=5 {
            let m = module(n);
            for i in area_basis(n) {
                let x = AreaMeasure::basis_element(n, i);
                let ts = m.hat_t_act(&m.hat_s_act(&x).unwrap()).unwrap();
                let st = m.hat_s_act(&m.hat_t_act(&x).unwrap()).unwrap();
                assert_eq!(ts, st);
            }
        }
    }

    #[test]
    fn glob_examples() {
        let m = module(2);
        assert_eq!(m.glob(&AreaMeasure::b(2, 3, 1).unwrap()).unwrap(), Valuation::mu(2, 3, 1).unwrap());
        for n in 1..=4 {
            let m = module(n);
            for k in 0..2 * n {
                for i in valalg::basis(n, k) {
                    let d = m.delta_measure(k, i.q).unwrap();
                    assert_eq!(m.glob(&d).unwrap(), Valuation::basis_element(n, i));
                    if let Ok(nm) = m.null_measure(k, i.q) {
                        assert!(m.glob(&nm).unwrap().is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        for n in 1..=4 {
            let m = module(n);
            let val = m.val();
            assert!(m.delta_map(&val.chi()).unwrap().is_zero());
            let s = m.top_b().scale_rational(&int(2));
            assert_eq!(m.delta_map(&val.vol()).unwrap(), s);
            assert!(m.in_centroid_kernel(&s).unwrap());
            for i in valalg::full_basis(n) {
                let phi = Valuation::basis_element(n, i);
                assert_eq!(m.frak_b(&phi).unwrap().scale_rational(&int(2)), m.delta_map(&fourier(&phi)).unwrap());
            }
        }
    }

    #[test]
    fn frak_units_and_kernel() {
        for n in 1..=5 {
            let m = module(n);
            let one = GradedPoly::one(Coords::St);
            assert_eq!(m.frak_b_poly(&one).unwrap(), m.top_b());
            assert_eq!(m.frak_g_poly(&one).unwrap(), m.top_gamma());
            assert!(m.frak_g_poly(&poly_p(n, Coords::St)).unwrap().is_zero());
            assert_eq!(
                m.frak_b_poly(&poly_p(n, Coords::St)).unwrap(),
                m.frak_g_poly(&poly_q(n - 1, Coords::St)).unwrap()
            );
        }
    }

    #[test]
    fn delta_basis_examples() {
        let m = module(2);
        assert_eq!(m.delta_measure(2, 1).unwrap(), AreaMeasure::gamma(2, 2, 1).unwrap());
        assert_eq!(m.delta_measure(3, 1).unwrap(), AreaMeasure::b(2, 3, 1).unwrap());
        let n10 = AreaMeasure::gamma(2, 1, 0).unwrap().try_sub(&AreaMeasure::b(2, 1, 0).unwrap()).unwrap();
        assert_eq!(m.null_measure(1, 0).unwrap(), n10.scale_rational(&rat(2, 3)));
        assert!(m.is_angular(&AreaMeasure::zero(2)).unwrap());
        assert!(!m.is_angular(&AreaMeasure::b(2, 1, 0).unwrap()).unwrap());
        for n in 1..=5 {
            let m = module(n);
            for i in area_basis(n) {
                let x = AreaMeasure::basis_element(n, i);
                let d = m.to_delta_basis(&x).unwrap();
                assert_eq!(m.from_delta_basis(&d).unwrap(), x);
            }
            for d in m.angular_basis() {
                assert!(m.is_angular(&d).unwrap());
            }
        }
    }

    #[test]
    fn classical_delta_examples() {
        for n in 1..=4 {
            let m = module(n);
            let top = m.classical_delta(2 * n - 1).unwrap();
            assert_eq!(top, m.top_b());
            assert_eq!(m.classical_delta(0).unwrap(), AreaMeasure::gamma(n, 0, 0).unwrap());
            for k in 0..2 * n {
                assert_eq!(m.angular_first_variation_dim(k).unwrap(), 1);
                let d = m.classical_delta(k).unwrap();
                assert!(m.is_angular(&d).unwrap() && m.in_centroid_kernel(&d).unwrap());
            }
        }
    }

    #[test]
    fn n10_is_a_first_variation() {
        // delta maps Val_2 onto all of Area_1 when n = 2
        let m = module(2);
        assert_eq!(m.delta_image_rank(1), 2);
        assert!(m.in_centroid_kernel(&m.null_measure(1, 0).unwrap()).unwrap());
    }

    #[test]
    fn a_operator_examples() {
        let m = module(4);
        let zero = GradedPoly::zero(Coords::Tu);
        assert!(m.a_operator(&zero, &zero).unwrap().is_zero());
        let t = GradedPoly::t(Coords::Tu);
        assert!(matches!(m.a_operator(&zero, &t), Err(Error::MalformedUPoly(_))));
        for i in 0..3 {
            let ui = GradedPoly::u().pow(i);
            assert_eq!(m.a_operator(&zero, &ui).unwrap(), m.frak_g_poly(&ui).unwrap());
            for j in 0..3 {
                let p = t.pow(j).try_mul(&GradedPoly::u().pow(i)).unwrap();
                assert!(m.is_angular(&m.a_operator(&p, &zero).unwrap()).unwrap());
            }
        }
        for n in 1..=4 {
            let m = module(n);
            for k in 0..2 * n {
                assert!(m.a_operator_spans_angular(k).unwrap(), "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn presentation_small() {
        for n in 1..=3 {
            assert!(module(n).presentation_check().passed(), "n = {n}");
        }
    }

    #[test]
    fn decomposition_small() {
        for n in 1..=4 {
            let m = module(n);
            for k in 1..2 * n {
                assert!(m.decomposition(k).passed(), "n = {n}: {:?}", m.decomposition(k));
            }
            for k in 0..2 * n - 1 {
                assert!(m.g_image_is_gamma_span(k).0, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn magic_b() {
        for n in 1..=5 {
            let m = module(n);
            for i in 0..n {
                assert_eq!(m.frak_b_poly(&GradedPoly::u().pow(i)).unwrap(), m.magic_b_expected(i));
                for j in 0..n - i {
                    let got = m.magic_b_mod_gamma_actual(i, j).unwrap().b_part();
                    assert_eq!(got, m.magic_b_mod_gamma_expected(i, j), "n = {n}, i = {i}, j = {j}");
                }
            }
        }
    }

    #[test]
    fn magic_g() {
        for n in 1..=5 {
            let m = module(n);
            let u_hat = GradedPoly::u();
            for i in 0..n {
                let c = m.magic_g_constant(i).unwrap().expect("proportional to Delta");
                assert_eq!(c, AreaModule::magic_g_closed_constant(i));
                // iterate u_hat = 4 s_hat - t_hat^2 directly on Gamma_{2n-2,n-1}
                let mut g = m.top_gamma();
                for _ in 0..i {
                    let four_s = m.hat_s_act(&g).unwrap().scale_rational(&int(4));
                    let tt = m.hat_t_act(&m.hat_t_act(&g).unwrap()).unwrap();
                    g = four_s.try_sub(&tt).unwrap();
                }
                assert_eq!(g, m.frak_g_poly(&u_hat.pow(i)).unwrap());
                assert_eq!(g, m.delta_measure(2 * (n - i - 1), n - i - 1).unwrap().scale(&c));
            }
        }
        assert_eq!(AreaModule::magic_g_closed_constant(2), pi_frac(60, 1, -2));
    }

    #[test]
    fn c_im_expansions() {
        for n in 2..=5 {
            let m = module(n);
            for i in 1..n {
                for j in 0..n - i {
                    let (eb, eg) = m.c_im_expected(i, j);
                    let (ab, ag) = m.c_im_actual(i, j).unwrap();
                    assert_eq!(ab, eb, "n = {n}, i = {i}, m = {j}");
                    assert_eq!(ag, eg, "n = {n}, i = {i}, m = {j}");
                }
            }
        }
    }

    #[test]
    fn prefactor_values() {
        // omega_4 / (pi omega_3) at n = 2, k = 1
        assert_eq!(valalg::hat_t_prefactor(2, 1), omega(4).div_monomial(&(PiScalar::pi() * omega(3))).unwrap());
        assert_eq!(valalg::hat_t_prefactor(2, 1), PiScalar::frac(3, 8));
    }
}
