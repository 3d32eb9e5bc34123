use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Polynomial, Var};
use crate::error::{Error, Result};

/// A polynomial divided by a product of unit factors `(1 + b*y_j)` and
/// `(1 + b*t_i)`.
///
/// Elements are kept reduced: no recorded factor divides the numerator. Since
/// the unit factors are irreducible and pairwise coprime, the reduced form is
/// unique and structural equality is equality of fractions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct LocalizedElement {
    numerator: Polynomial,
    denom_y: BTreeMap<u32, u32>,
    denom_t: BTreeMap<u32, u32>,
}

/// `1 + b*v`.
pub fn unit(v: Var) -> Polynomial {
    &Polynomial::one() + &(&Polynomial::beta() * &Polynomial::var(v))
}

impl LocalizedElement {
    pub fn new(
        numerator: Polynomial,
        denom_y: BTreeMap<u32, u32>,
        denom_t: BTreeMap<u32, u32>,
    ) -> Self {
        Self { numerator, denom_y, denom_t }.reduced()
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Polynomial::one().into()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denom_y(&self) -> &BTreeMap<u32, u32> {
        &self.denom_y
    }

    pub fn denom_t(&self) -> &BTreeMap<u32, u32> {
        &self.denom_t
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.denom_y.is_empty() && self.denom_t.is_empty()
    }

    fn factors(&self) -> impl Iterator<Item = (Var, u32)> + '_ {
        self.denom_y
            .iter()
            .map(|(&j, &e)| (Var::Y(j), e))
            .chain(self.denom_t.iter().map(|(&i, &e)| (Var::T(i), e)))
    }

    fn exponents_mut(&mut self, v: Var) -> &mut u32 {
        match v {
            Var::Y(j) => self.denom_y.entry(j).or_default(),
            Var::T(i) => self.denom_t.entry(i).or_default(),
            _ => unreachable!("only y and t unit factors are allowed"),
        }
    }

    /// The full denominator as a polynomial.
    pub fn denominator(&self) -> Polynomial {
        let mut d = Polynomial::one();
        for (v, e) in self.factors() {
            d = &d * &unit(v).pow(e);
        }
        d
    }

    /// Cancels unit factors that divide the numerator.
    pub fn reduced(mut self) -> Self {
        if self.numerator.is_zero() {
            self.denom_y.clear();
            self.denom_t.clear();
            return self;
        }
        let factors: Vec<_> = self.factors().collect();
        for (v, mut e) in factors {
            while e > 0 {
                match self.numerator.divide_by_unit(v) {
                    Some(q) => {
                        self.numerator = q;
                        e -= 1;
                    }
                    None => break,
                }
            }
            *self.exponents_mut(v) = e;
        }
        self.denom_y.retain(|_, e| *e > 0);
        self.denom_t.retain(|_, e| *e > 0);
        self
    }

    /// Numerator scaled to the denominator `target`, which must be a multiple
    /// of this element's denominator.
    fn numerator_over(&self, target: &LocalizedElement) -> Polynomial {
        let mut num = self.numerator.clone();
        for (v, e) in target.factors() {
            let have = match v {
                Var::Y(j) => self.denom_y.get(&j).copied().unwrap_or(0),
                Var::T(i) => self.denom_t.get(&i).copied().unwrap_or(0),
                _ => 0,
            };
            if e > have {
                num = &num * &unit(v).pow(e - have);
            }
        }
        num
    }

    fn common_denominator(&self, other: &Self) -> Self {
        let merge = |a: &BTreeMap<u32, u32>, b: &BTreeMap<u32, u32>| {
            let mut out = a.clone();
            for (&k, &e) in b {
                let slot = out.entry(k).or_default();
                *slot = (*slot).max(e);
            }
            out
        };
        Self {
            numerator: Polynomial::one(),
            denom_y: merge(&self.denom_y, &other.denom_y),
            denom_t: merge(&self.denom_t, &other.denom_t),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut common = self.common_denominator(other);
        common.numerator = &self.numerator_over(&common) + &other.numerator_over(&common);
        common.reduced()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { numerator: -&self.numerator, ..self.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self {
            numerator: &self.numerator * &other.numerator,
            ..self.clone()
        };
        for (v, e) in other.factors() {
            *out.exponents_mut(v) += e;
        }
        out.reduced()
    }

    /// Exact quotient. Unit factors of the divisor's numerator move into the
    /// denominator; anything else must divide exactly.
    pub fn divide(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::NotDivisible);
        }
        let mut divisor = other.numerator.clone();
        let mut out = Self {
            numerator: self.numerator.clone(),
            ..self.clone()
        };
        let candidates: Vec<Var> = divisor
            .variables()
            .into_iter()
            .filter(|v| matches!(v, Var::Y(_) | Var::T(_)))
            .collect();
        for v in candidates {
            while let Some(q) = divisor.divide_by_unit(v) {
                divisor = q;
                *out.exponents_mut(v) += 1;
            }
        }
        out.numerator = (&out.numerator * &other.denominator()).exact_divide(&divisor)?;
        Ok(out.reduced())
    }

    /// Sets `b = 0`; every denominator becomes 1.
    pub fn beta_zero(&self) -> Polynomial {
        self.numerator.vanish(|v| v == Var::Beta)
    }

    /// Applies a scalar-linear operator (in `x` only) to the numerator.
    pub fn map_numerator(&self, f: impl FnOnce(&Polynomial) -> Polynomial) -> Self {
        Self {
            numerator: f(&self.numerator),
            ..self.clone()
        }
        .reduced()
    }

    /// Renames variables. Denominator factors follow their variable, which
    /// must stay in the `y`/`t` families.
    pub fn rename(&self, f: impl Fn(Var) -> Var) -> Self {
        let mut out = Self {
            numerator: self.numerator.rename(&f),
            ..Self::default()
        };
        for (v, e) in self.factors() {
            *out.exponents_mut(f(v)) += e;
        }
        out.reduced()
    }

    pub fn render(&self) -> String {
        let num = self.numerator.render();
        if self.is_polynomial() {
            return num;
        }
        let factors: Vec<String> = self
            .factors()
            .map(|(v, e)| match e {
                1 => format!("(1+b*{v})"),
                _ => format!("(1+b*{v})^{e}"),
            })
            .collect();
        let num = if self.numerator.len() > 1 { format!("({num})") } else { num };
        format!("{num} / ({})", factors.join("*"))
    }
}

impl From<Polynomial> for LocalizedElement {
    fn from(numerator: Polynomial) -> Self {
        Self { numerator, ..Self::default() }
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &LocalizedElement {
    type Output = LocalizedElement;

    fn add(self, rhs: &LocalizedElement) -> LocalizedElement {
        LocalizedElement::add(self, rhs)
    }
}

impl Sub for &LocalizedElement {
    type Output = LocalizedElement;

    fn sub(self, rhs: &LocalizedElement) -> LocalizedElement {
        LocalizedElement::sub(self, rhs)
    }
}

impl Mul for &LocalizedElement {
    type Output = LocalizedElement;

    fn mul(self, rhs: &LocalizedElement) -> LocalizedElement {
        LocalizedElement::mul(self, rhs)
    }
}

impl Neg for &LocalizedElement {
    type Output = LocalizedElement;

    fn neg(self) -> LocalizedElement {
        LocalizedElement::neg(self)
    }
}
