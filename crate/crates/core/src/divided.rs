//! Divided difference operators acting on the `x` variables.
//!
//! `y`, `t` and `b` are scalars for every operator here. Words follow the
//! composition convention of [`Permutation`]: for `w = s_{i_1} ... s_{i_l}`,
//! `partial_w = partial_{i_1} o ... o partial_{i_l}`, so `partial_{i_l}` is
//! applied first.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::error::Result;
use crate::permutation::Permutation;
use crate::poly::{LocalizedElement, Monomial, Polynomial, Var};

/// `x_i -> x_{w(i)}`.
pub fn apply_perm_x(w: &Permutation, f: &Polynomial) -> Polynomial {
    if w.is_identity() {
        return f.clone();
    }
    f.rename(|v| match v {
        Var::X(i) => Var::X(w.apply(i as usize) as u32),
        other => other,
    })
}

/// `(f - s_i f) / (x_i - x_{i+1})`, computed monomial by monomial:
/// `x_i^a x_{i+1}^b` maps to the sum of `x_i^{a-1-k} x_{i+1}^{b+k}` over
/// `0 <= k < a-b` when `a > b`, to its negated mirror when `a < b`, and to 0
/// when `a = b`.
pub fn partial_i(i: usize, f: &Polynomial) -> Polynomial {
    assert!(i >= 1, "divided differences are indexed from 1");
    let (xi, xj) = (Var::X(i as u32), Var::X(i as u32 + 1));
    let mut out = Polynomial::zero();
    for (m, c) in f.terms() {
        let (a, b) = (m.exponent(xi), m.exponent(xj));
        if a == b {
            continue;
        }
        let (_, rest) = m.split(|v| v == xi || v == xj);
        let (hi, lo, coeff): (u32, u32, BigInt) = if a > b { (a, b, c.clone()) } else { (b, a, -c) };
        for k in 0..hi - lo {
            let (ei, ej) = if a > b { (hi - 1 - k, lo + k) } else { (lo + k, hi - 1 - k) };
            let mono = rest.mul(&Monomial::from_pairs([(xi, ei), (xj, ej)]));
            out.add_term(mono, coeff.clone());
        }
    }
    out
}

/// The same operator through generic exact division; used to cross-check
/// [`partial_i`].
pub fn partial_i_by_division(i: usize, f: &Polynomial) -> Result<Polynomial> {
    let swapped = apply_perm_x(&Permutation::simple(i), f);
    (f - &swapped).exact_divide(&(Polynomial::x(i) - Polynomial::x(i + 1)))
}

/// Applies `partial_i` along `word`, rightmost letter first.
pub fn partial_word(word: &[usize], f: &Polynomial) -> Polynomial {
    word.iter().rev().fold(f.clone(), |acc, &i| {
        if acc.is_zero() {
            acc
        } else {
            partial_i(i, &acc)
        }
    })
}

pub fn partial_w(w: &Permutation, f: &Polynomial) -> Polynomial {
    partial_word(w.canonical_reduced_word().letters(), f)
}

/// The isobaric operator `pi_i(f) = partial_i((1 + b*x_{i+1}) f)`.
pub fn pi_i(i: usize, f: &LocalizedElement) -> LocalizedElement {
    let weight = Polynomial::one() + Polynomial::beta() * Polynomial::x(i + 1);
    f.map_numerator(|num| partial_i(i, &(&weight * num)))
}

/// Skew divided difference `partial_{w/v}`, the operator coefficient of
/// `partial_v(g)` in `partial_w(f g)`.
///
/// Recursion on the leftmost letter of the canonical word `w = s_i w'`:
/// `partial_{w/v} = partial_i o partial_{w'/v} + [s_i v < v] s_i o partial_{w'/s_i v}`.
pub fn skew_partial(w: &Permutation, v: &Permutation, f: &Polynomial) -> Polynomial {
    let mut memo = HashMap::new();
    skew_rec(w, v, f, &mut memo)
}

fn skew_rec(
    w: &Permutation,
    v: &Permutation,
    f: &Polynomial,
    memo: &mut HashMap<(Permutation, Permutation), Polynomial>,
) -> Polynomial {
    if !v.bruhat_leq(w) {
        return Polynomial::zero();
    }
    if w.is_identity() {
        return f.clone();
    }
    let key = (w.clone(), v.clone());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let i = *w.left_descents().iter().next().expect("non-identity has a left descent");
    let rest = w.left_mul_simple(i);
    let mut out = partial_i(i, &skew_rec(&rest, v, f, memo));
    if v.has_left_descent(i) {
        let inner = skew_rec(&rest, &v.left_mul_simple(i), f, memo);
        out += &apply_perm_x(&Permutation::simple(i), &inner);
    }
    memo.insert(key, out.clone());
    out
}

/// Which operator to apply.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OperatorKind {
    PartialI(usize),
    PartialW(Permutation),
    PiI(usize),
    Skew { w: Permutation, v: Permutation },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Poly(Polynomial),
    Localized(LocalizedElement),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorRequest {
    pub kind: OperatorKind,
    pub operand: Operand,
}

impl OperatorRequest {
    /// Runs the request. Operators other than `pi_i` keep the operand's type;
    /// `pi_i` always yields a localized element.
    pub fn apply(&self) -> Operand {
        let linear = |f: &Polynomial| match &self.kind {
            OperatorKind::PartialI(i) => partial_i(*i, f),
            OperatorKind::PartialW(w) => partial_w(w, f),
            OperatorKind::Skew { w, v } => skew_partial(w, v, f),
            OperatorKind::PiI(_) => unreachable!("handled separately"),
        };
        match (&self.kind, &self.operand) {
            (OperatorKind::PiI(i), Operand::Poly(f)) => {
                Operand::Localized(pi_i(*i, &f.clone().into()))
            }
            (OperatorKind::PiI(i), Operand::Localized(f)) => Operand::Localized(pi_i(*i, f)),
            (_, Operand::Poly(f)) => Operand::Poly(linear(f)),
            (_, Operand::Localized(f)) => Operand::Localized(f.map_numerator(linear)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn permutation_action() {
        let s1 = Permutation::simple(1);
        assert_eq!(apply_perm_x(&s1, &p("x1")), p("x2"));
        assert_eq!(apply_perm_x(&s1, &p("x1 + x2")), p("x1 + x2"));
        assert_eq!(apply_perm_x(&perm("2,3,1"), &p("x1*x2^2")), p("x2*x3^2"));
    }

    #[test]
    fn simple_divided_differences() {
        assert_eq!(partial_i(1, &p("x1")), p("1"));
        assert_eq!(
            partial_i(1, &p("(x1 - y1)*(x1 - t1)")),
            p("x1 + x2 - y1 - t1")
        );
        assert!(partial_i(2, &p("x1")).is_zero());
        let f = p("3*x1^3*x2*y2 - x2^4*b + x3*x1 - 7");
        for i in 1..=3 {
            assert_eq!(partial_i(i, &f), partial_i_by_division(i, &f).unwrap());
        }
    }

    #[test]
    fn composite_divided_differences() {
        let f = p("(x1 - y1)*(x1 - t1)");
        assert_eq!(partial_w(&perm("3,1,2"), &f), p("1"));
        assert_eq!(partial_w(&Permutation::identity(), &f), f);
        assert_eq!(partial_w(&perm("3,2,1"), &p("x1^2*x2")), p("1"));
    }

    #[test]
    fn isobaric_operator() {
        let x1_minus_y1 = LocalizedElement::new(
            p("x1 - y1"),
            [(1, 1)].into_iter().collect(),
            Default::default(),
        );
        assert_eq!(pi_i(1, &x1_minus_y1), LocalizedElement::one());
        assert_eq!(pi_i(1, &LocalizedElement::one()), p("-b").into());
        let f: LocalizedElement = p("x1^2*b + x2*y1").into();
        assert_eq!(pi_i(1, &f).beta_zero(), partial_i(1, &f.beta_zero()));
    }

    #[test]
    fn skew_examples() {
        let s1 = Permutation::simple(1);
        let id = Permutation::identity();
        assert_eq!(skew_partial(&s1, &s1, &p("x1")), p("x2"));
        let f = p("x1^2*x2 - y1*x1");
        assert_eq!(skew_partial(&s1, &id, &f), partial_i(1, &f));
        assert!(skew_partial(&perm("2,3,1"), &perm("1,3,2"), &p("x2")).is_zero());
        assert_eq!(
            skew_partial(&perm("2,3,1"), &perm("1,3,2"), &f),
            partial_i(1, &apply_perm_x(&Permutation::simple(2), &f))
        );
        assert!(skew_partial(&s1, &Permutation::simple(2), &f).is_zero());
    }

    #[test]
    fn operator_requests() {
        let req = OperatorRequest {
            kind: OperatorKind::PiI(1),
            operand: Operand::Poly(Polynomial::one()),
        };
        assert_eq!(req.apply(), Operand::Localized(p("-b").into()));
        let req = OperatorRequest {
            kind: OperatorKind::Skew { w: Permutation::simple(1), v: Permutation::simple(1) },
            operand: Operand::Poly(p("x1")),
        };
        assert_eq!(req.apply(), Operand::Poly(p("x2")));
    }
}
