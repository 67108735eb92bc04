//! Named identity checks, each run for a single `n`.
//!
//! [`run`] fans the `(check, n)` pairs out over a thread pool and assembles a
//! [`VerifyReport`]. Apart from the optional timings, a report depends only on
//! its inputs.

use std::fmt;
use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::areamod::{area_basis, dim_area, AreaIndex, AreaMeasure, AreaModule};
use crate::error::{Error, Result};
use crate::forms;
use crate::linalg::Matrix;
use crate::poly::{
    angularity_condition, ball_binomial_sum, fu_f, fu_f_closed_st, fu_f_closed_tu, poly_p, poly_p_closed_st,
    poly_p_closed_tu, poly_q, poly_q_closed_st, poly_q_closed_tu, apply_diff, Coords, DiffOp, GradedPoly,
};
use crate::scalars::{binomial, int, PiScalar, Rational};
use crate::valalg::{self, fourier, ValAlgebra, Valuation};

/// Result of one check at one `n`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

/// Collects failures; the first one becomes the witness.
#[derive(Default)]
struct Tally {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + fmt::Display>(&mut self, got: &T, expected: &T, what: impl FnOnce() -> String) {
        if got != expected {
            self.failures.push(format!("{}: got {got}, expected {expected}", what()));
        }
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    fn finish(self) -> Outcome {
        let passed = self.failures.is_empty();
        let witness = (!passed).then(|| {
            let extra = self.failures.len() - 1;
            if extra == 0 {
                self.failures[0].clone()
            } else {
                format!("{} (and {extra} more)", self.failures[0])
            }
        });
        Outcome { passed, witness, notes: self.notes }
    }
}

type CheckFn = fn(u32) -> Result<Outcome>;

pub struct Check {
    pub name: &'static str,
    pub summary: &'static str,
    run: CheckFn,
}

impl Check {
    pub fn run(&self, n: u32) -> Outcome {
        match (self.run)(n) {
            Ok(o) => o,
            Err(e) => Outcome { passed: false, witness: Some(format!("error: {e}")), notes: vec![] },
        }
    }
}

pub const CHECKS: &[Check] = &[
    Check {
        name: "poly-identities",
        summary: "generating-function identities and closed forms of f_k, p_k, q_k at k = n",
        run: poly_identities,
    },
    Check { name: "binomial-identity", summary: "sum (-1)^i C(n-i,i) C(2n-2i,n-i) = 2^n", run: binomial_identity },
    Check { name: "fu-quotient", summary: "f_{n+1}, f_{n+2} vanish and the quotient has the right dimensions", run: fu_quotient },
    Check { name: "ball-evaluation", summary: "values on the unit ball and u p_n = 0", run: ball_evaluation },
    Check {
        name: "module-well-defined",
        summary: "f_{n+1}(s_hat,t_hat) and f_{n+2}(s_hat,t_hat) annihilate every basis measure",
        run: module_well_defined,
    },
    Check { name: "kernel-lemma", summary: "g(p_n) = 0 and b(p_n) = g(q_{n-1})", run: kernel_lemma },
    Check { name: "presentation", summary: "ker h equals the submodule I_n in every degree", run: presentation },
    Check { name: "dimensions", summary: "per-degree and total dimensions of the area module", run: dimensions },
    Check { name: "decomposition", summary: "Area_{2n-k-1} = b_k + g_{k-1} and image(g) = span(Gamma)", run: decomposition },
    Check { name: "oracle", summary: "differential-forms oracle agrees on t_hat; Delta forms are radial", run: oracle },
    Check { name: "centroid-kernel", summary: "rank of the first variation and its angular part", run: centroid_kernel },
    Check { name: "angularity", summary: "image of A is the angular subspace; the angularity condition", run: angularity },
    Check { name: "magic-lemma", summary: "b(u^i), b(t^{2j}u^i) mod Gamma, g(u^i), and the c_im expansions", run: magic_lemma },
    Check { name: "homomorphism", summary: "glob is a module map; F(glob(b(p_n))) = (pi/2) t p_n", run: homomorphism },
];

pub fn check_names() -> Vec<&'static str> {
    CHECKS.iter().map(|c| c.name).collect()
}

pub fn find(name: &str) -> Result<&'static Check> {
    CHECKS.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCheck(name.to_string()))
}

/// Checks whose name equals `filter` or contains it.
pub fn select(filter: Option<&str>) -> Result<Vec<&'static Check>> {
    let Some(f) = filter else { return Ok(CHECKS.iter().collect()) };
    if let Some(c) = CHECKS.iter().find(|c| c.name == f) {
        return Ok(vec![c]);
    }
    let hits: Vec<&Check> = CHECKS.iter().filter(|c| c.name.contains(f)).collect();
    if hits.is_empty() {
        Err(Error::UnknownCheck(f.to_string()))
    } else {
        Ok(hits)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NResult {
    pub n: u32,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub results: Vec<NResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub n_min: u32,
    pub n_max: u32,
    pub passed: bool,
    pub checks: Vec<CheckReport>,
}

/// Runs the selected checks for every `n` in `n_min..=n_max`.
/// Timings are recorded only when `timings` is set.
pub fn run(checks: &[&Check], n_min: u32, n_max: u32, timings: bool) -> Result<VerifyReport> {
    if n_min == 0 || n_min > n_max {
        return Err(Error::Type(format!("bad range n = {n_min}..={n_max}; need 1 <= n_min <= n_max")));
    }
    let jobs: Vec<(usize, u32)> =
        (0..checks.len()).flat_map(|c| (n_min..=n_max).map(move |n| (c, n))).collect();
    let done: Vec<(usize, u32, Outcome, u64)> = jobs
        .into_par_iter()
        .map(|(c, n)| {
            let start = Instant::now();
            let o = checks[c].run(n);
            (c, n, o, start.elapsed().as_millis() as u64)
        })
        .collect();
    let mut reports: Vec<CheckReport> = checks
        .iter()
        .map(|c| CheckReport { name: c.name.to_string(), passed: true, results: vec![], millis: timings.then_some(0) })
        .collect();
    for (c, n, outcome, ms) in done {
        let r = &mut reports[c];
        r.passed &= outcome.passed;
        if let Some(t) = r.millis.as_mut() {
            *t += ms;
        }
        r.results.push(NResult { n, outcome });
    }
    for r in &mut reports {
        r.results.sort_by_key(|x| x.n);
    }
    Ok(VerifyReport { n_min, n_max, passed: reports.iter().all(|r| r.passed), checks: reports })
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            write!(f, "{status} {} (n = {}..={})", c.name, self.n_min, self.n_max)?;
            if let Some(ms) = c.millis {
                write!(f, " [{ms} ms]")?;
            }
            writeln!(f)?;
            for r in &c.results {
                if let Some(w) = &r.outcome.witness {
                    writeln!(f, "  n = {}: {w}", r.n)?;
                }
                for note in &r.outcome.notes {
                    writeln!(f, "  n = {}: note: {note}", r.n)?;
                }
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        writeln!(f, "{} of {} checks passed", self.checks.len() - failed, self.checks.len())
    }
}

fn poly_identities(k: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let tt = GradedPoly::t(Coords::St);
    let u = GradedPoly::u().convert(Coords::St);
    let lhs = u.try_mul(&poly_q(k - 1, Coords::St))?.scale(&PiScalar::from_int(-1)).try_add(&tt.try_mul(&poly_p(k, Coords::St))?)?;
    let rhs = fu_f(k + 1, Coords::St).scale_rational(&int(((k + 1) * (k + 1)) as i64));
    t.eq(&lhs, &rhs, || format!("-(4s-t^2) q_{} + t p_{k} vs (k+1)^2 f_{}", k - 1, k + 1));
    let lhs = u.try_mul(&poly_p(k, Coords::St))?;
    let rhs = fu_f(k + 2, Coords::St)
        .scale_rational(&int(2 * (k as i64 + 2)))
        .try_add(&tt.try_mul(&fu_f(k + 1, Coords::St))?.scale_rational(&int(k as i64 + 1)))?;
    t.eq(&lhs, &rhs, || format!("(4s-t^2) p_{k}"));
    // k = 1 also covers the k = 0 members of p and q
    for j in if k == 1 { 0..=1 } else { k..=k } {
        if j >= 1 {
            let f = fu_f(j, Coords::St);
            t.eq(&f, &fu_f_closed_st(j), || format!("f_{j} in (s,t)"));
            t.eq(&fu_f(j, Coords::Tu), &fu_f_closed_tu(j), || format!("f_{j} in (t,u)"));
        }
        t.eq(&poly_p(j, Coords::St), &poly_p_closed_st(j), || format!("p_{j} in (s,t)"));
        t.eq(&poly_p(j, Coords::Tu), &poly_p_closed_tu(j), || format!("p_{j} in (t,u)"));
        t.eq(&poly_q(j, Coords::St), &poly_q_closed_st(j), || format!("q_{j} in (s,t)"));
        t.eq(&poly_q(j, Coords::Tu), &poly_q_closed_tu(j), || format!("q_{j} in (t,u)"));
        let four = int(4);
        let dp = apply_diff(DiffOp::Du, &fu_f(j + 2, Coords::Tu))?.scale_rational(&four);
        t.eq(&poly_p(j, Coords::Tu), &dp, || format!("p_{j} = 4 d/du f_{}", j + 2));
        let dq = apply_diff(DiffOp::Du, &poly_p(j + 2, Coords::Tu))?.scale_rational(&four);
        t.eq(&poly_q(j, Coords::Tu), &dq, || format!("q_{j} = 4 d/du p_{}", j + 2));
    }
    Ok(t.finish())
}

fn binomial_identity(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    t.eq(&ball_binomial_sum(n), &(BigInt::from(1) << n as usize), || format!("binomial sum at n = {n}"));
    Ok(t.finish())
}

fn st_monomials(k: u32) -> Vec<GradedPoly> {
    (0..=k / 2).map(|a| GradedPoly::monomial(Coords::St, a, k - 2 * a, PiScalar::one())).collect()
}

fn poly_coords(p: &GradedPoly, k: u32) -> Vec<PiScalar> {
    (0..=k / 2).map(|a| p.coefficient(a, k - 2 * a)).collect()
}

fn fu_quotient(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let a = ValAlgebra::get(n)?;
    for m in [n + 1, n + 2] {
        t.check(a.from_poly(&fu_f(m, Coords::St)).is_zero(), || format!("from_poly(f_{m}) != 0"));
    }
    let gens = [fu_f(n + 1, Coords::St), fu_f(n + 2, Coords::St)];
    for k in 0..=2 * n + 2 {
        // degree-k slice of the ideal (f_{n+1}, f_{n+2}) inside R[s,t]
        let mut cols = Vec::new();
        for (g, d) in gens.iter().zip([n + 1, n + 2]) {
            if d <= k {
                for m in st_monomials(k - d) {
                    cols.push(poly_coords(&m.try_mul(g)?, k));
                }
            }
        }
        let ideal = Matrix::from_columns((k / 2 + 1) as usize, &cols);
        let quotient = (k / 2 + 1) as usize - ideal.rank();
        let expected = if k <= 2 * n { valalg::dim_val(n, k as i64)? } else { 0 };
        t.eq(&quotient, &expected, || format!("dim of the quotient in degree {k}"));
        if k <= 2 * n {
            let images: Vec<Vec<PiScalar>> =
                st_monomials(k).iter().map(|m| a.from_poly(m).coords_in_degree(k)).collect();
            let rank = Matrix::from_columns(valalg::dim_val(n, k as i64)?, &images).rank();
            t.eq(&rank, &expected, || format!("rank of from_poly in degree {k}"));
        }
    }
    Ok(t.finish())
}

fn ball_evaluation(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let a = ValAlgebra::get(n)?;
    for i in 0..=n {
        let v = a.monomial(i, 2 * n - 2 * i);
        let expected = PiScalar::from_rational(Rational::from_integer(binomial((2 * n - 2 * i) as i64, (n - i) as i64)));
        t.eq(&a.eval_ball_top(&v)?, &expected, || format!("s^{i} t^{} on the ball", 2 * n - 2 * i));
        t.eq(&a.eval_ball_top_by_volume(&v)?, &expected, || format!("s^{i} t^{} by volume", 2 * n - 2 * i));
    }
    let pn = a.from_poly(&poly_p(n, Coords::St));
    let tn_pn = a.product(&a.from_poly(&GradedPoly::t(Coords::St).pow(n)), &pn)?;
    let expected = PiScalar::from_int(if n.is_multiple_of(2) { 1 } else { -1 } << n);
    t.eq(&a.eval_ball_top(&tn_pn)?, &expected, || "t^n p_n on the ball".into());
    t.check(a.product(&a.u(), &pn)?.is_zero(), || "u p_n != 0".into());
    Ok(t.finish())
}

fn module_well_defined(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = AreaModule::get(n)?;
    let fs = [fu_f(n + 1, Coords::St), fu_f(n + 2, Coords::St)];
    for i in area_basis(n) {
        let x = AreaMeasure::basis_element(n, i);
        for (f, d) in fs.iter().zip([n + 1, n + 2]) {
            t.check(m.apply_hat_poly(f, &x)?.is_zero(), || format!("f_{d}(s_hat,t_hat) * {i} != 0"));
        }
        let st = m.hat_s_act(&m.hat_t_act(&x)?)?;
        let ts = m.hat_t_act(&m.hat_s_act(&x)?)?;
        t.eq(&st, &ts, || format!("s_hat and t_hat commute on {i}"));
    }
    Ok(t.finish())
}

fn kernel_lemma(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = AreaModule::get(n)?;
    let pn = poly_p(n, Coords::St);
    let g = m.frak_g_poly(&pn)?;
    t.check(g.is_zero(), || format!("g(p_{n}) = {g}"));
    let b = m.frak_b_poly(&pn)?;
    let gq = m.frak_g_poly(&poly_q(n - 1, Coords::St))?;
    t.eq(&b, &gq, || format!("b(p_{n}) vs g(q_{})", n - 1));
    Ok(t.finish())
}

fn presentation(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let r = AreaModule::get(n)?.presentation_check();
    for d in &r.degrees {
        t.check(d.equal, || {
            format!("degree {}: dim ker h = {}, dim I = {}, joint rank {}", d.d, d.kernel_dim, d.ideal_dim, d.joint_rank)
        });
    }
    Ok(t.finish())
}

fn dimensions(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let mut total = 0;
    for k in 0..2 * n as i64 {
        let d = dim_area(n, k)?;
        let expected = valalg::dim_val(n, k)? + valalg::dim_val(n, k + 1)? - 1;
        t.eq(&d, &expected, || format!("dim Area_{k}"));
        total += d;
    }
    let count = area_basis(n).len();
    t.eq(&count, &total, || "basis size vs per-degree sum".into());
    let expected = (n * n + n) as usize;
    t.eq(&count, &expected, || "total dimension n^2 + n".into());
    let val_total: usize = (0..=2 * n as i64).map(|k| valalg::dim_val(n, k).unwrap()).sum();
    t.eq(&count, &(2 * val_total - 2 * n as usize - 2), || "2 dim Val - 2n - 2".into());
    t.note(format!(
        "total {count}; n^2 + n + 1 = {} would be one too large",
        n * n + n + 1
    ));
    Ok(t.finish())
}

fn decomposition(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = AreaModule::get(n)?;
    for k in 1..2 * n {
        let d = m.decomposition(k);
        t.check(d.passed(), || {
            format!(
                "k = {k}: dims b = {}, g = {}, area = {}, intersection {} (expected {}), spans {}",
                d.b_dim, d.g_dim, d.area_dim, d.intersection_dim, d.expected_intersection, d.spans
            )
        });
    }
    for k in 0..2 * n - 1 {
        let (ok, rank) = m.g_image_is_gamma_span(k);
        t.check(ok, || format!("g(Val_{k}) has rank {rank} or is not span(Gamma)"));
    }
    Ok(t.finish())
}

fn oracle(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = AreaModule::get(n)?;
    let table = forms::derive_t_hat_table(n)?;
    for (from, image) in m.hat_t_table() {
        let ours: std::collections::BTreeMap<AreaIndex, PiScalar> = image.terms().map(|(i, c)| (i, c.clone())).collect();
        t.check(table.get(from) == Some(&ours), || format!("t_hat table differs at {from}"));
    }
    for k in 0..2 * n {
        for i in valalg::basis(n, k) {
            let f = forms::delta_form(n, k, i.q);
            let r = f.contract_r()?;
            t.check(r.is_zero(), || format!("i_R of the Delta[{k},{}] form is {r}", i.q));
        }
    }
    Ok(t.finish())
}

fn centroid_kernel(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = AreaModule::get(n)?;
    let a = m.val();
    t.check(m.delta_map(&a.chi())?.is_zero(), || "delta(chi) != 0".into());
    let rank: usize = (0..2 * n).map(|k| m.delta_image_rank(k)).sum();
    let expected = valalg::full_basis(n).len() - 1;
    t.eq(&rank, &expected, || "rank of delta".into());
    t.eq(&m.delta_map(&a.vol())?, &m.top_b().scale_rational(&int(2)), || "delta(vol)".into());
    for k in 0..2 * n {
        let dim = m.angular_first_variation_dim(k)?;
        t.eq(&dim, &1, || format!("dim of angular ∩ image(delta) in degree {k}"));
        if dim == 1 {
            let d = m.classical_delta(k)?;
            t.check(m.is_angular(&d)? && m.in_centroid_kernel(&d)?, || format!("classical Delta_{k} = {d}"));
        }
    }
    Ok(t.finish())
}

fn tu_monomials(max_deg: i64) -> Vec<GradedPoly> {
    let mut out = vec![GradedPoly::zero(Coords::Tu)];
    for d in 0..=max_deg.max(-1) {
        let d = d as u32;
        for i in 0..=d / 2 {
            out.push(GradedPoly::monomial(Coords::Tu, i, d - 2 * i, PiScalar::one()));
        }
    }
    out
}

fn angularity(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = AreaModule::get(n)?;
    let a = m.val();
    for k in 0..2 * n {
        t.check(m.a_operator_spans_angular(k)?, || format!("image of A in degree {k} is not the angular subspace"));
    }
    let zero = GradedPoly::zero(Coords::Tu);
    let half_pi = PiScalar::monomial(Rational::new(1.into(), 2.into()), 1);
    let vol = a.vol();
    for d in 0..n {
        for i in 0..=d / 2 {
            let j = d - 2 * i;
            let p = GradedPoly::monomial(Coords::Tu, i, j, PiScalar::one());
            let x = m.a_operator(&p, &zero)?;
            t.check(m.is_angular(&x)?, || format!("A(u^{i} t^{j}, 0) = {x} is not angular"));
            let c = (j + 1 + 2 * i * (2 * i + j + 2)) as i64;
            let target = GradedPoly::monomial(Coords::Tu, i, j + 1, PiScalar::one());
            let expected = a.apply_hat_poly(&target, &vol)?.scale(&half_pi.scale(&int(c)));
            t.eq(&m.glob(&x)?, &expected, || format!("glob A(u^{i} t^{j}, 0)"));
        }
    }
    for i in 0..n - 1 {
        let ui = GradedPoly::monomial(Coords::Tu, i, 0, PiScalar::one());
        let x = m.a_operator(&zero, &ui)?;
        let expected = a.apply_hat_poly(&GradedPoly::u().pow(i + 1), &vol)?.scale(&half_pi);
        t.eq(&m.glob(&x)?, &expected, || format!("glob A(0, u^{i})"));
    }
    // the condition against angularity, on monomial pairs and lemma pairs
    let mut pairs: Vec<(GradedPoly, GradedPoly)> = Vec::new();
    let qs = tu_monomials(n as i64 - 2);
    for p in tu_monomials(n as i64 - 1) {
        for q in &qs {
            pairs.push((p.clone(), q.clone()));
        }
    }
    for d in 1..n {
        for i in 1..=d / 2 {
            let j = d - 2 * i;
            let p = GradedPoly::monomial(Coords::Tu, i, j, PiScalar::from_int((j + 1) as i64));
            let c = (2 * i * (2 * i + j + 2)) as i64;
            let q = GradedPoly::monomial(Coords::Tu, i - 1, j + 1, PiScalar::from_int(c));
            pairs.push((p.clone(), q.clone()));
            pairs.push((p, q.scale(&PiScalar::from_int(2))));
        }
    }
    for (p, q) in pairs {
        let cond = angularity_condition(&p, &q)?;
        let ang = m.is_angular(&m.frak_b_poly(&p)?.try_add(&m.frak_g_poly(&q)?)?)?;
        t.check(cond == ang, || format!("(p, q) = ({p}, {q}): condition {cond}, angular {ang}"));
    }
    Ok(t.finish())
}

fn magic_lemma(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = AreaModule::get(n)?;
    let u = GradedPoly::u();
    for i in 0..n {
        t.eq(&m.frak_b_poly(&u.pow(i))?, &m.magic_b_expected(i), || format!("b(u^{i})"));
        for j in 0..n - i {
            let got = m.magic_b_mod_gamma_actual(i, j)?.b_part();
            t.eq(&got, &m.magic_b_mod_gamma_expected(i, j), || format!("C(2i+2j+1,2j) b(t^{} u^{i}) mod Gamma", 2 * j));
        }
        match m.magic_g_constant(i)? {
            None => t.check(false, || format!("g(u^{i}) is not a multiple of Delta")),
            Some(c) => {
                let closed = AreaModule::magic_g_closed_constant(i);
                t.eq(&c, &closed, || format!("constant of g(u^{i})"));
                let alternative = PiScalar::monomial(
                    Rational::new(crate::scalars::factorial(2 * n as u64 + 1), crate::scalars::factorial(n as u64)),
                    -(i as i32),
                );
                let verdict = if alternative == c { "matches" } else { "does not match" };
                t.note(format!("g(u^{i}) = {c} * Delta[{},{}]; (2n+1)!/(n! pi^i) = {alternative} {verdict}", 2 * (n - i - 1), n - i - 1));
            }
        }
    }
    for i in 1..n {
        for j in 0..n - i {
            let (eb, eg) = m.c_im_expected(i, j);
            let (ab, ag) = m.c_im_actual(i, j)?;
            t.eq(&ab, &eb, || format!("c_im b(t^{} u^{i}) with m = {j}", 2 * j));
            t.eq(&ag, &eg, || format!("c_im g(t^{} u^{}) with m = {j}", 2 * j + 1, i - 1));
        }
    }
    Ok(t.finish())
}

fn random_val(rng: &mut ChaCha8Rng, n: u32) -> Valuation {
    let terms = valalg::full_basis(n)
        .into_iter()
        .filter_map(|i| {
            let c: i64 = rng.gen_range(-3..=3);
            (c != 0 && rng.gen_bool(0.5)).then(|| ((i.k as i64, i.q as i64), PiScalar::monomial(int(c), rng.gen_range(-1..=1))))
        })
        .collect::<Vec<_>>();
    Valuation::from_terms(n, terms)
}

fn random_area(rng: &mut ChaCha8Rng, n: u32) -> AreaMeasure {
    let terms = area_basis(n)
        .into_iter()
        .filter_map(|i| {
            let c: i64 = rng.gen_range(-3..=3);
            (c != 0 && rng.gen_bool(0.5))
                .then(|| (i.kind, i.k as i64, i.q as i64, PiScalar::monomial(int(c), rng.gen_range(-1..=1))))
        })
        .collect::<Vec<_>>();
    AreaMeasure::from_terms(n, terms)
}

fn homomorphism(n: u32) -> Result<Outcome> {
    let mut t = Tally::default();
    let m = AreaModule::get(n)?;
    let a = m.val();
    let check_pair = |phi: &Valuation, x: &AreaMeasure, t: &mut Tally| -> Result<()> {
        let lhs = m.glob(&m.act(phi, x)?)?;
        let rhs = a.convolution(phi, &m.glob(x)?)?;
        t.eq(&lhs, &rhs, || format!("glob(act({phi}, {x}))"));
        Ok(())
    };
    for i in valalg::full_basis(n) {
        let phi = Valuation::basis_element(n, i);
        for j in area_basis(n) {
            check_pair(&phi, &AreaMeasure::basis_element(n, j), &mut t)?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + n as u64);
    for _ in 0..100 {
        let phi = random_val(&mut rng, n);
        let x = random_area(&mut rng, n);
        check_pair(&phi, &x, &mut t)?;
    }
    let half_pi = PiScalar::monomial(Rational::new(1.into(), 2.into()), 1);
    let pn = poly_p(n, Coords::St);
    let lhs = fourier(&m.glob(&m.frak_b_poly(&pn)?)?);
    let rhs = a.product(&a.t(), &a.from_poly(&pn))?.scale(&half_pi);
    t.eq(&lhs, &rhs, || "F(glob(b(p_n))) vs (pi/2) t p_n".into());
    let qn = poly_q(n - 1, Coords::St);
    let lhs = fourier(&m.glob(&m.frak_g_poly(&qn)?)?);
    let rhs = a.product(&a.u(), &a.from_poly(&qn))?.scale(&half_pi);
    t.eq(&lhs, &rhs, || "F(glob(g(q_{n-1}))) vs (pi/2) u q_{n-1}".into());
    Ok(t.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass_small() {
        let all: Vec<&Check> = CHECKS.iter().collect();
        let r = run(&all, 1, 2, false).unwrap();
        assert!(r.passed, "{r}");
    }

    #[test]
    fn filters() {
        assert_eq!(select(Some("kernel-lemma")).unwrap().len(), 1);
        assert_eq!(select(None).unwrap().len(), CHECKS.len());
        assert_eq!(select(Some("ident")).unwrap().len(), 2);
        assert!(matches!(select(Some("nope")), Err(Error::UnknownCheck(_))));
        assert!(run(&select(None).unwrap(), 0, 2, false).is_err());
    }

    #[test]
    fn report_is_deterministic() {
        let cs = select(Some("magic-lemma")).unwrap();
        let a = run(&cs, 1, 3, false).unwrap();
        let b = run(&cs, 1, 3, false).unwrap();
        assert_eq!(a.to_string(), b.to_string());
        assert!(a.to_string().contains("n = 3: note: g(u^1) = 6 * pi^-1 * Delta[2,1]"));
    }
}
