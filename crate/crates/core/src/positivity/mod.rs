//! Positivity certificates: a coefficient written as a nonnegative integer
//! combination of monomials in prescribed differences, found by an exact
//! solver and checked by an independent re-expansion.
//!
//! Three modes share the machinery. Schubert coefficients use `t_i - y_j`,
//! localizations use the roots `t_j - t_i` of an inversion set, and
//! K-theoretic coefficients use `b^k * prod (t_i (-) y_j)`.
//!
//! Certificates are searched in coordinates where every difference is a
//! polynomial with nonnegative coefficients (see [`positive_form`]); the
//! substitutions are invertible, so this changes nothing but the arithmetic.
//!
//! Only pairs whose variables occur in the target are offered to the solver.
//! This loses nothing: at the point `t = 1, y = 0, b = 1` every difference is
//! positive and the derivative of each monomial in `t_i` is positive (in
//! `y_j` negative), so a positive combination using `t_i` or `y_j` depends on
//! it.

mod certificate;
mod solver;

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permutation::RootPair;
use crate::poly::{unit, LocalizedElement, Monomial, Polynomial, Var};

pub use certificate::{verify_certificate, Certificate, CertificateTerm, DifferencePair, Mode, Target};
pub use solver::{solve_nonneg_integer, solve_with_budget, DEFAULT_NODE_BUDGET};

pub const DEFAULT_SEARCH_CAP: u128 = 1_000_000;
pub const QUICK_SCREEN_SAMPLES: usize = 32;
pub const DEFAULT_MAX_BETA_POWER: u32 = 6;
const SCREEN_SEED: u64 = 0x05C4_BE27;
const SCREEN_SPREAD: i64 = 5;

/// Search limits for the K-theoretic certifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub max_z_degree: u32,
    pub max_beta_power: u32,
}

impl Bounds {
    /// `d + 4` differences and `b^6` for a coefficient of degree `d`.
    pub fn default_for_degree(d: i64) -> Self {
        Self { max_z_degree: (d + 4).max(0) as u32, max_beta_power: DEFAULT_MAX_BETA_POWER }
    }

    pub fn doubled(&self) -> Self {
        Self { max_z_degree: self.max_z_degree * 2, max_beta_power: self.max_beta_power * 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum CertifyOutcome {
    Certified(Certificate),
    /// No representation exists at all; only reported in homogeneous modes.
    InfeasibleComplete,
    InconclusiveAtBounds(Bounds),
    DenominatorShapeViolation,
}

impl CertifyOutcome {
    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            CertifyOutcome::Certified(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, CertifyOutcome::Certified(_))
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Number of multisets of size `degree` over `n` elements.
pub fn multiset_count(n: usize, degree: usize) -> u128 {
    match (n, degree) {
        (_, 0) => 1,
        (0, _) => 0,
        _ => binomial((n + degree - 1) as u128, degree as u128),
    }
}

pub fn enumerate_difference_monomials(degree: usize, allowed: &[DifferencePair]) -> Result<Vec<Vec<DifferencePair>>> {
    enumerate_difference_monomials_capped(degree, allowed, DEFAULT_SEARCH_CAP)
}

/// All multisets of size `degree` over `allowed`, in the order of
/// `combinations_with_replacement` on the given order of `allowed`.
pub fn enumerate_difference_monomials_capped(
    degree: usize,
    allowed: &[DifferencePair],
    cap: u128,
) -> Result<Vec<Vec<DifferencePair>>> {
    let size = multiset_count(allowed.len(), degree);
    if size > cap {
        return Err(Error::SearchSpaceTooLarge { size, cap });
    }
    if degree == 0 {
        return Ok(vec![Vec::new()]);
    }
    Ok(allowed.iter().copied().combinations_with_replacement(degree).collect())
}

/// Rejection test: evaluates `c` at seeded random points with every `t_i`
/// at least every `y_j`, so all differences `t_i - y_j` are nonnegative.
/// `false` proves `c` has no certificate; `true` proves nothing.
pub fn quick_screen(c: &Polynomial, ambient: usize, samples: usize) -> bool {
    let top = c.variables().iter().filter_map(Var::index).max().unwrap_or(0).max(ambient as u32);
    let mut rng = ChaCha8Rng::seed_from_u64(SCREEN_SEED);
    (0..samples).all(|_| {
        let ys: Vec<i64> = (0..=top).map(|_| rng.gen_range(0..SCREEN_SPREAD)).collect();
        let floor = ys.iter().copied().max().unwrap_or(0);
        let ts: Vec<i64> = (0..=top).map(|_| floor + rng.gen_range(0..SCREEN_SPREAD)).collect();
        let value = c.evaluate(|v| match v {
            Var::Y(j) => BigInt::from(ys[j as usize]),
            Var::T(i) => BigInt::from(ts[i as usize]),
            _ => BigInt::from(1),
        });
        !value.is_negative()
    })
}

fn not_homogeneous(what: &dyn std::fmt::Display) -> Error {
    Error::NotHomogeneous(what.to_string())
}

fn indices(vars: &BTreeSet<Var>, ambient: usize, pick: fn(Var) -> Option<u32>) -> Vec<u32> {
    vars.iter().filter_map(|&v| pick(v)).filter(|&i| i as usize <= ambient).collect()
}

fn t_index(v: Var) -> Option<u32> {
    match v {
        Var::T(i) => Some(i),
        _ => None,
    }
}

fn y_index(v: Var) -> Option<u32> {
    match v {
        Var::Y(j) => Some(j),
        _ => None,
    }
}

fn to_lambda(x: &BigInt) -> Result<u64> {
    x.to_u64().ok_or_else(|| Error::InternalMismatch(format!("multiplicity {x} does not fit in 64 bits")))
}

fn checked(cert: Certificate, target: &LocalizedElement) -> Result<CertifyOutcome> {
    if verify_certificate(&cert, target) {
        Ok(CertifyOutcome::Certified(cert))
    } else {
        Err(Error::InternalMismatch(format!("certificate does not re-expand to {target}")))
    }
}

/// Image of a difference in positive coordinates: `t_i + y_j` for
/// `t_i - y_j` (after `y -> -y`), `t_i + y_j + b*t_i*y_j` for `t_i (-) y_j`
/// (after `y_j -> -y_j / (1 + b*y_j)`), and `z_i + ... + z_{j-1}` for the root
/// `t_j - t_i` (after `t_i -> z_1 + ... + z_{i-1}`, with `z_k` written `t_k`).
pub fn positive_form(pair: &DifferencePair) -> Polynomial {
    let (t, y) = (Polynomial::var(Var::T(pair.i)), Polynomial::var(Var::Y(pair.j)));
    match pair.mode {
        Mode::Schubert => t + y,
        Mode::Ktheory => &(&t + &y) + &(Polynomial::beta() * t * y),
        Mode::Root => (pair.i..pair.j).fold(Polynomial::zero(), |acc, k| acc + Polynomial::var(Var::T(k))),
    }
}

/// `c(t, -y)`.
pub fn schubert_coordinates(c: &Polynomial) -> Polynomial {
    Polynomial::from_terms(c.terms().map(|(m, coeff)| {
        let odd = m.factors().iter().filter(|(v, _)| matches!(v, Var::Y(_))).map(|(_, e)| e).sum::<u32>() % 2 == 1;
        (m.clone(), if odd { -coeff } else { coeff.clone() })
    }))
}

/// `loc` with `t_i -> z_1 + ... + z_{i-1}`.
pub fn root_coordinates(loc: &Polynomial) -> Polynomial {
    let map: BTreeMap<Var, Polynomial> = loc
        .variables()
        .into_iter()
        .filter_map(|v| match v {
            Var::T(i) => Some((v, (1..i).fold(Polynomial::zero(), |acc, k| acc + Polynomial::var(Var::T(k))))),
            _ => None,
        })
        .collect();
    loc.substitute(&map)
}

/// `c` with `y_j -> -y_j / (1 + b*y_j)`, under which `1 + b*y_j` becomes
/// `1 / (1 + b*y_j)`; `None` if the image is not a polynomial, in which case
/// `c` has no certificate.
pub fn k_coordinates(c: &LocalizedElement) -> Option<Polynomial> {
    let mut top: BTreeMap<u32, u32> = BTreeMap::new();
    for (m, _) in c.numerator().terms() {
        for &(v, e) in m.factors() {
            if let Var::Y(j) = v {
                let slot = top.entry(j).or_default();
                *slot = (*slot).max(e);
            }
        }
    }
    for &j in c.denom_y().keys() {
        top.entry(j).or_default();
    }
    let mut image = Polynomial::zero();
    for (m, coeff) in c.numerator().terms() {
        let (ys, rest) = m.split(|v| matches!(v, Var::Y(_)));
        let mut term = Polynomial::term(coeff.clone(), rest);
        for (&j, &d) in &top {
            let e = ys.exponent(Var::Y(j));
            let sign = if e % 2 == 1 { -1 } else { 1 };
            term = term * Polynomial::term(sign, Monomial::var(Var::Y(j))).pow(e) * unit(Var::Y(j)).pow(d - e);
        }
        image += &term;
    }
    let mut denom = BTreeMap::new();
    for (&j, &d) in &top {
        let e = c.denom_y().get(&j).copied().unwrap_or(0);
        if e >= d {
            image = image * unit(Var::Y(j)).pow(e - d);
        } else {
            denom.insert(j, d - e);
        }
    }
    let reduced = LocalizedElement::new(image, denom, BTreeMap::new());
    reduced.is_polynomial().then(|| reduced.numerator().clone())
}

/// Solves with columns and target in positive coordinates. No cancellation
/// can occur there, so a column with a monomial outside the target, or a
/// coefficient above the target's, must have `lambda = 0` and is dropped
/// before the exact solver runs.
fn solve_positive(columns: &[Polynomial], target: &Polynomial) -> Result<Option<Vec<BigInt>>> {
    if target.terms().any(|(_, c)| c.is_negative()) {
        return Ok(None);
    }
    let keep: Vec<usize> = (0..columns.len())
        .filter(|&k| columns[k].terms().all(|(m, c)| target.coefficient(m) >= *c))
        .collect();
    let kept: Vec<Polynomial> = keep.iter().map(|&k| columns[k].clone()).collect();
    let Some(lambda) = solve_nonneg_integer(&kept, target)? else {
        return Ok(None);
    };
    let mut full = vec![BigInt::from(0); columns.len()];
    for (k, l) in keep.into_iter().zip(lambda) {
        full[k] = l;
    }
    Ok(Some(full))
}

fn column(m: &[DifferencePair], beta: u32) -> Polynomial {
    m.iter().fold(Polynomial::beta().pow(beta), |acc, p| acc * positive_form(p))
}

fn certificate_from(
    mode: Mode,
    c: &LocalizedElement,
    columns: &[(Vec<DifferencePair>, u32)],
    lambda: &[BigInt],
) -> Result<Certificate> {
    let mut cert = Certificate::empty(mode, c.render());
    for ((m, k), l) in columns.iter().zip(lambda) {
        if l.is_positive() {
            cert.terms.push(CertificateTerm {
                pairs: m.iter().map(|p| (p.i, p.j)).collect(),
                beta: *k,
                lambda: to_lambda(l)?,
            });
        }
    }
    Ok(cert)
}

/// Homogeneous modes: every representation uses monomials of degree exactly
/// `d`, so an infeasible system is a proof of non-membership.
fn certify_homogeneous(
    c: &Polynomial,
    image: &Polynomial,
    d: usize,
    allowed: &[DifferencePair],
    mode: Mode,
) -> Result<CertifyOutcome> {
    let columns: Vec<(Vec<DifferencePair>, u32)> =
        enumerate_difference_monomials(d, allowed)?.into_iter().map(|m| (m, 0)).collect();
    let polys: Vec<Polynomial> = columns.iter().map(|(m, k)| column(m, *k)).collect();
    let Some(lambda) = solve_positive(&polys, image)? else {
        return Ok(CertifyOutcome::InfeasibleComplete);
    };
    let target: LocalizedElement = c.clone().into();
    checked(certificate_from(mode, &target, &columns, &lambda)?, &target)
}

/// Certifies `c` in `N[t_i - y_j]` with `1 <= i, j <= ambient`.
pub fn certify_schubert(c: &Polynomial, ambient: usize) -> Result<CertifyOutcome> {
    if c.contains_var(|v| matches!(v, Var::X(_) | Var::Beta)) {
        return Err(not_homogeneous(c));
    }
    if c.is_zero() {
        return Ok(CertifyOutcome::Certified(Certificate::empty(Mode::Schubert, c.render())));
    }
    let d = c.homogeneous_degree(|_| 1).ok_or_else(|| not_homogeneous(c))?;
    if !quick_screen(c, ambient, QUICK_SCREEN_SAMPLES) {
        return Ok(CertifyOutcome::InfeasibleComplete);
    }
    let vars = c.variables();
    let ys = indices(&vars, ambient, y_index);
    let allowed: Vec<DifferencePair> = indices(&vars, ambient, t_index)
        .into_iter()
        .cartesian_product(ys)
        .map(|(i, j)| DifferencePair::new(i, j, Mode::Schubert))
        .collect();
    certify_homogeneous(c, &schubert_coordinates(c), d as usize, &allowed, Mode::Schubert)
}

/// Certifies a localization in `N[t_j - t_i : (i,j) in inv]`.
pub fn certify_billey(loc: &Polynomial, inv: &BTreeSet<RootPair>) -> Result<CertifyOutcome> {
    if loc.contains_var(|v| !matches!(v, Var::T(_))) {
        return Err(not_homogeneous(loc));
    }
    if loc.is_zero() {
        return Ok(CertifyOutcome::Certified(Certificate::empty(Mode::Root, loc.render())));
    }
    let d = loc.homogeneous_degree(|_| 1).ok_or_else(|| not_homogeneous(loc))?;
    let allowed: Vec<DifferencePair> =
        inv.iter().map(|r| DifferencePair::new(r.i as u32, r.j as u32, Mode::Root)).collect();
    certify_homogeneous(loc, &root_coordinates(loc), d as usize, &allowed, Mode::Root)
}

/// Degree of `c` with `t` and `y` of degree 1 and `b` of degree -1; the unit
/// factors `1 + b*y_j` have degree 0.
pub fn k_degree(c: &LocalizedElement) -> Result<i64> {
    let num = c.numerator();
    if num.contains_var(|v| v.is_x()) {
        return Err(not_homogeneous(c));
    }
    num.homogeneous_degree(|v| if v == Var::Beta { -1 } else { 1 })
        .ok_or_else(|| not_homogeneous(c))
}

/// Searches `lambda_{m,k}` in `N` with
/// `sum lambda_{m,k} b^k prod_{(i,j) in m} (t_i (-) y_j) = c`, growing the
/// number of differences up to `bounds.max_z_degree`.
///
/// A representation of degree `d` only uses columns with `|m| - k = d`.
/// Exhausting the bounds is never a proof of non-membership.
pub fn certify_grothendieck(c: &LocalizedElement, ambient: usize, bounds: Bounds) -> Result<CertifyOutcome> {
    if !c.denom_t().is_empty() {
        return Ok(CertifyOutcome::DenominatorShapeViolation);
    }
    if c.is_zero() {
        return Ok(CertifyOutcome::Certified(Certificate::empty(Mode::Ktheory, c.render())));
    }
    let d = k_degree(c)?;
    let Some(image) = k_coordinates(c) else {
        return Ok(CertifyOutcome::InconclusiveAtBounds(bounds));
    };
    let mut vars = c.numerator().variables();
    vars.extend(c.denom_y().keys().map(|&j| Var::Y(j)));
    let ys = indices(&vars, ambient, y_index);
    let allowed: Vec<DifferencePair> = indices(&vars, ambient, t_index)
        .into_iter()
        .cartesian_product(ys)
        .map(|(i, j)| DifferencePair::new(i, j, Mode::Ktheory))
        .collect();
    let mut columns: Vec<(Vec<DifferencePair>, u32)> = Vec::new();
    let mut polys: Vec<Polynomial> = Vec::new();
    let mut total: u128 = 0;
    for z in d.max(0) as u32..=bounds.max_z_degree {
        let k = z as i64 - d;
        if k > bounds.max_beta_power as i64 {
            break;
        }
        total += multiset_count(allowed.len(), z as usize);
        if total > DEFAULT_SEARCH_CAP {
            return Err(Error::SearchSpaceTooLarge { size: total, cap: DEFAULT_SEARCH_CAP });
        }
        for m in enumerate_difference_monomials(z as usize, &allowed)? {
            polys.push(column(&m, k as u32));
            columns.push((m, k as u32));
        }
        if let Some(lambda) = solve_positive(&polys, &image)? {
            return checked(certificate_from(Mode::Ktheory, c, &columns, &lambda)?, c);
        }
    }
    Ok(CertifyOutcome::InconclusiveAtBounds(bounds))
}

/// [`certify_grothendieck`] at the default bounds, retried once with doubled
/// bounds. Exhausted budgets and oversized searches during the retry count as
/// inconclusive at the bounds reached.
pub fn certify_grothendieck_default(c: &LocalizedElement, ambient: usize) -> Result<CertifyOutcome> {
    if !c.denom_t().is_empty() || c.is_zero() {
        return certify_grothendieck(c, ambient, Bounds::default_for_degree(0));
    }
    let first = Bounds::default_for_degree(k_degree(c)?);
    let inconclusive = |e: Error, b: Bounds| match e {
        Error::SearchSpaceTooLarge { .. } | Error::BudgetExceeded { .. } => Ok(CertifyOutcome::InconclusiveAtBounds(b)),
        other => Err(other),
    };
    match certify_grothendieck(c, ambient, first) {
        Ok(CertifyOutcome::InconclusiveAtBounds(_)) => {}
        Ok(outcome) => return Ok(outcome),
        Err(e) => return inconclusive(e, first),
    }
    match certify_grothendieck(c, ambient, first.doubled()) {
        Ok(outcome) => Ok(outcome),
        Err(e) => inconclusive(e, first),
    }
}
