//! Sparse multivariate polynomials over the integers in the variable
//! families `x`, `y`, `t` and the deformation parameter `b` (beta).
//!
//! Coefficients are arbitrary precision. A [`Polynomial`] is a map from
//! [`Monomial`] to nonzero coefficient, so structural equality is equality of
//! polynomials. Monomials are ordered lexicographically with
//! `x1 > x2 > ... > y1 > ... > t1 > ... > b` in significance; the largest
//! monomial of a polynomial is its leading term for exact division.

mod localized;
mod parse;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use localized::{unit, LocalizedElement};

/// A single variable. The derived order is the variable precedence
/// `x1 < x2 < ... < y1 < ... < t1 < ... < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X(u32),
    Y(u32),
    T(u32),
    Beta,
}

impl Var {
    pub fn index(&self) -> Option<u32> {
        match *self {
            Var::X(i) | Var::Y(i) | Var::T(i) => Some(i),
            Var::Beta => None,
        }
    }

    pub fn is_x(&self) -> bool {
        matches!(self, Var::X(_))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::X(i) => write!(f, "x{i}"),
            Var::Y(i) => write!(f, "y{i}"),
            Var::T(i) => write!(f, "t{i}"),
            Var::Beta => write!(f, "b"),
        }
    }
}

/// A product of variable powers, stored sorted by variable with positive
/// exponents only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(v: Var) -> Self {
        Self(vec![(v, 1)])
    }

    /// Builds a monomial from arbitrary `(var, exponent)` pairs, merging
    /// repeats and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut map: BTreeMap<Var, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        Self(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|k| self.0[k].1)
            .unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    /// Degree counted with a per-variable integer weight.
    pub fn weighted_degree(&self, weight: impl Fn(Var) -> i64) -> i64 {
        self.0.iter().map(|&(v, e)| weight(v) * e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - f)),
                }
            } else {
                out.push((v, e));
            }
        }
        (j == other.0.len()).then_some(Monomial(out))
    }

    /// Splits off the part of the monomial in variables selected by `keep`.
    pub fn split(&self, keep: impl Fn(Var) -> bool) -> (Monomial, Monomial) {
        let (kept, rest): (Vec<_>, Vec<_>) = self.0.iter().partition(|(v, _)| keep(*v));
        (Monomial(kept), Monomial(rest))
    }

    /// Applies a variable renaming; repeated images have their exponents merged.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Monomial {
        Monomial::from_pairs(self.0.iter().map(|&(v, e)| (f(v), e)))
    }
}

/// Lexicographic monomial order: the monomial with the larger exponent in the
/// most significant variable where they differ is larger.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.0.cmp(&b.0) {
                // `self` has a positive exponent in a more significant variable.
                Ordering::Less => return Ordering::Greater,
                Ordering::Greater => return Ordering::Less,
                Ordering::Equal => match a.1.cmp(&b.1) {
                    Ordering::Equal => {}
                    o => return o,
                },
            }
        }
        self.0.len().cmp(&other.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn var(v: Var) -> Self {
        Self::term(1, Monomial::var(v))
    }

    pub fn x(i: usize) -> Self {
        Self::var(Var::X(i as u32))
    }

    pub fn y(i: usize) -> Self {
        Self::var(Var::Y(i as u32))
    }

    pub fn t(i: usize) -> Self {
        Self::var(Var::T(i as u32))
    }

    pub fn beta() -> Self {
        Self::var(Var::Beta)
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Self { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&Monomial::one()).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigInt)> {
        self.terms.last_key_value()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Total degree; `None` stands for the degree of the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Maximal degree in the variables selected by `pred`.
    pub fn degree_in(&self, pred: impl Fn(Var) -> bool) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.factors().iter().filter(|(v, _)| pred(*v)).map(|(_, e)| e).sum())
            .max()
    }

    /// If every monomial has the same weighted degree, returns it.
    pub fn homogeneous_degree(&self, weight: impl Fn(Var) -> i64) -> Option<i64> {
        let mut degrees = self.terms.keys().map(|m| m.weighted_degree(&weight));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|&(v, _)| v))
            .collect()
    }

    pub fn contains_var(&self, pred: impl Fn(Var) -> bool) -> bool {
        self.terms.keys().any(|m| m.factors().iter().any(|(v, _)| pred(*v)))
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Polynomial {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Self {
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn product<'a>(factors: impl IntoIterator<Item = &'a Polynomial>) -> Polynomial {
        factors.into_iter().fold(Self::one(), |acc, f| &acc * f)
    }

    /// Renames variables; monomials whose images coincide are merged.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Polynomial {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.add_term(m.rename(&f), c.clone());
        }
        out
    }

    /// Simultaneous substitution of the mapped variables.
    pub fn substitute(&self, map: &BTreeMap<Var, Polynomial>) -> Polynomial {
        let mut powers: HashMap<(Var, u32), Polynomial> = HashMap::new();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (replaced, kept) = m.split(|v| map.contains_key(&v));
            let mut value = Self::term(c.clone(), kept);
            for &(v, e) in replaced.factors() {
                let power = powers.entry((v, e)).or_insert_with(|| map[&v].pow(e));
                value = &value * &*power;
            }
            out += &value;
        }
        out
    }

    /// Sets the selected variables to zero.
    pub fn vanish(&self, pred: impl Fn(Var) -> bool) -> Polynomial {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| !m.factors().iter().any(|(v, _)| pred(*v)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, value: impl Fn(Var) -> BigInt) -> BigInt {
        let mut cache: HashMap<Var, BigInt> = HashMap::new();
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for &(v, e) in m.factors() {
                let base = cache.entry(v).or_insert_with(|| value(v));
                term *= num_traits::pow(base.clone(), e as usize);
            }
            total += term;
        }
        total
    }

    /// Groups terms by the exponent of `v`: entry `k` holds the coefficient
    /// polynomial of `v^k`.
    pub fn components_in(&self, v: Var) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = Vec::new();
        for (m, c) in &self.terms {
            let k = m.exponent(v) as usize;
            if out.len() <= k {
                out.resize_with(k + 1, Polynomial::zero);
            }
            let rest = Monomial(m.0.iter().filter(|(w, _)| *w != v).copied().collect());
            out[k].terms.insert(rest, c.clone());
        }
        out
    }

    /// Exact quotient `self / divisor`, failing with `NotDivisible` when the
    /// remainder of lexicographic division is nonzero.
    pub fn exact_divide(&self, divisor: &Polynomial) -> Result<Polynomial> {
        let (lead_m, lead_c) = divisor.leading_term().ok_or(Error::NotDivisible)?;
        if divisor.len() == 1 {
            let mut quotient = Self::zero();
            for (m, c) in &self.terms {
                let (q, r) = c.div_rem(lead_c);
                if !r.is_zero() {
                    return Err(Error::NotDivisible);
                }
                quotient.terms.insert(m.div(lead_m).ok_or(Error::NotDivisible)?, q);
            }
            return Ok(quotient);
        }
        let mut remainder = self.clone();
        let mut quotient = Self::zero();
        while let Some((m, c)) = remainder.terms.last_key_value() {
            let qm = m.div(lead_m).ok_or(Error::NotDivisible)?;
            let (qc, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Err(Error::NotDivisible);
            }
            for (dm, dc) in &divisor.terms {
                remainder.add_term(dm.mul(&qm), -(dc * &qc));
            }
            quotient.terms.insert(qm, qc);
        }
        Ok(quotient)
    }

    /// Divides by `1 + b*v` if possible, solving the recurrence on
    /// coefficients of powers of `b`.
    pub fn divide_by_unit(&self, v: Var) -> Option<Polynomial> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let parts = self.components_in(Var::Beta);
        let top = parts.len() - 1;
        if top == 0 {
            return None;
        }
        let var = Self::var(v);
        let mut quotient_parts: Vec<Polynomial> = Vec::with_capacity(top);
        for part in parts.iter().take(top) {
            let q = match quotient_parts.last() {
                Some(prev) => part - &(&var * prev),
                None => part.clone(),
            };
            quotient_parts.push(q);
        }
        if parts[top] != &var * &quotient_parts[top - 1] {
            return None;
        }
        let beta = Monomial::var(Var::Beta);
        let mut quotient = Self::zero();
        let mut power = Monomial::one();
        for part in quotient_parts {
            quotient += &part.mul_monomial(&power);
            power = power.mul(&beta);
        }
        Some(quotient)
    }

    /// Canonical text. Terms are sorted by decreasing total degree, then
    /// positive before negative coefficients, then decreasing monomial order.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|(ma, ca), (mb, cb)| {
            mb.degree()
                .cmp(&ma.degree())
                .then(ca.is_negative().cmp(&cb.is_negative()))
                .then(mb.cmp(ma))
        });
        let mut out = String::new();
        for (k, (m, c)) in terms.into_iter().enumerate() {
            let magnitude = c.abs();
            match (k, c.is_negative()) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if m.is_one() {
                out.push_str(&magnitude.to_string());
            } else if magnitude.is_one() {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{magnitude}*{m}"));
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Polynomial> {
        parse::parse_polynomial(text)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        Self::parse(text)
    }
}

impl From<i64> for Polynomial {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Polynomial> for Polynomial {
    fn sub_assign(&mut self, rhs: &Polynomial) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (small, large) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = Polynomial::zero();
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!(p("x1 - y1") + p("y1 - t1"), p("x1 - t1"));
        assert_eq!(p("x1 - y1") * p("x1 - t1"), p("x1^2 - y1*x1 - t1*x1 + y1*t1"));
        let q = p("3*b*x1*t2");
        assert!((&q + &(-&q)).is_zero());
        assert_eq!(q.scalar_mul(&BigInt::from(-2)), p("-6*x1*t2*b"));
    }

    #[test]
    fn substitution_examples() {
        let map = BTreeMap::from([(Var::X(1), Polynomial::t(2))]);
        assert_eq!(p("x1 - t1").substitute(&map), p("t2 - t1"));
        let map = BTreeMap::from([(Var::Y(1), Polynomial::zero())]);
        assert_eq!(p("x1 - y1").substitute(&map), p("x1"));
        let map = BTreeMap::from([(Var::T(3), Polynomial::y(1))]);
        assert_eq!(p("t3 - t1").substitute(&map), p("y1 - t1"));
        let swap = BTreeMap::from([(Var::X(1), Polynomial::x(2)), (Var::X(2), Polynomial::x(1))]);
        assert_eq!(p("x1^2*x2").substitute(&swap), p("x2^2*x1"));
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p("x1^2 - x2^2").exact_divide(&p("x1 - x2")).unwrap(), p("x1 + x2"));
        assert_eq!(
            (p("x1 - t1") * p("x1 - t2")).exact_divide(&p("x1 - t2")).unwrap(),
            p("x1 - t1")
        );
        assert_eq!(p("x1 - y1").exact_divide(&p("x1 - x2")), Err(Error::NotDivisible));
        assert_eq!(p("3*x1").exact_divide(&p("2")), Err(Error::NotDivisible));
        assert_eq!(p("4*x1*y1").exact_divide(&p("2*y1")).unwrap(), p("2*x1"));
        assert_eq!(p("1").exact_divide(&Polynomial::zero()), Err(Error::NotDivisible));
    }

    #[test]
    fn unit_division() {
        let unit = p("1 + b*y1");
        let f = p("x1 - y1 + b*t2");
        assert_eq!((&f * &unit).divide_by_unit(Var::Y(1)), Some(f.clone()));
        assert_eq!(f.divide_by_unit(Var::Y(1)), None);
        assert_eq!(p("x1").divide_by_unit(Var::Y(1)), None);
    }

    #[test]
    fn render_examples() {
        assert_eq!(Polynomial::zero().render(), "0");
        assert_eq!(p("x1 - y1").render(), "x1 - y1");
        assert_eq!(p("t2 - y1").render(), "t2 - y1");
        assert_eq!(p("t2 - t1").render(), "t2 - t1");
        assert_eq!(p("x1 + x2 - y1 - t1").render(), "x1 + x2 - y1 - t1");
        assert_eq!(p("-y1").render(), "-y1");
        assert_eq!(p("2*x1^2*t1 - 7").render(), "2*x1^2*t1 - 7");
        assert_eq!(p("b*x1 + x1").render(), "x1*b + x1");
    }

    #[test]
    fn degrees() {
        assert_eq!(Polynomial::zero().total_degree(), None);
        assert_eq!(p("x1^2*y1 + t3").total_degree(), Some(3));
        assert_eq!(p("x1^2*y1 + x3").degree_in(|v| v.is_x()), Some(2));
        assert_eq!(p("t1 - y2").homogeneous_degree(|_| 1), Some(1));
        assert_eq!(p("t1 - 1").homogeneous_degree(|_| 1), None);
    }
}
