use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use schubert_core::divided::{partial_i, partial_i_by_division, partial_w, partial_word, pi_i, skew_partial};
use schubert_core::positivity::{certify_schubert, solve_nonneg_integer, verify_certificate, CertifyOutcome};
use schubert_core::{LocalizedElement, Monomial, Permutation, Polynomial, Var};

fn var() -> impl Strategy<Value = Var> + Clone {
    prop_oneof![
        (1u32..=3).prop_map(Var::X),
        (1u32..=3).prop_map(Var::Y),
        (1u32..=3).prop_map(Var::T),
        Just(Var::Beta),
    ]
}

fn x_var() -> impl Strategy<Value = Var> + Clone {
    prop_oneof![(1u32..=3).prop_map(Var::X), (1u32..=2).prop_map(Var::Y)]
}

fn poly_over(vars: impl Strategy<Value = Var> + Clone, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    let monomial = prop::collection::vec((vars, 1u32..=3), 0..=3).prop_map(Monomial::from_pairs);
    prop::collection::vec((monomial, -5i64..=5), 0..=max_terms)
        .prop_map(|terms| Polynomial::from_terms(terms.into_iter().map(|(m, c)| (m, BigInt::from(c)))))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    poly_over(var(), 5)
}

fn localized() -> impl Strategy<Value = LocalizedElement> {
    let denom = prop::collection::btree_map(1u32..=3, 1u32..=2, 0..=2);
    (poly_over(var(), 4), denom.clone(), denom).prop_map(|(n, y, t)| LocalizedElement::new(n, y, t))
}

fn perm(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::new(&v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
    }

    #[test]
    fn exact_division(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_divide(&b).unwrap(), a);
    }

    #[test]
    fn render_parse_round_trip(a in poly()) {
        prop_assert_eq!(Polynomial::parse(&a.render()).unwrap(), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn localized_reduction_and_specialization(a in localized(), b in localized()) {
        prop_assert_eq!(a.clone().reduced(), a.clone());
        prop_assert_eq!((&a + &b).beta_zero(), &a.beta_zero() + &b.beta_zero());
        prop_assert_eq!((&a - &b).beta_zero(), &a.beta_zero() - &b.beta_zero());
        prop_assert_eq!((&a * &b).beta_zero(), &a.beta_zero() * &b.beta_zero());
        if !b.is_zero() {
            prop_assert_eq!((&a * &b).divide(&b).unwrap(), a);
        }
    }

    #[test]
    fn localized_agrees_with_polynomials(p in poly(), q in poly()) {
        let (lp, lq): (LocalizedElement, LocalizedElement) = (p.clone().into(), q.clone().into());
        prop_assert_eq!(&lp + &lq, LocalizedElement::from(&p + &q));
        prop_assert_eq!(&lp * &lq, LocalizedElement::from(&p * &q));
    }

    #[test]
    fn divided_difference_relations(f in poly()) {
        for i in 1..=3 {
            prop_assert_eq!(partial_i(i, &f), partial_i_by_division(i, &f).unwrap());
            prop_assert!(partial_i(i, &partial_i(i, &f)).is_zero());
        }
        prop_assert_eq!(partial_word(&[1, 2, 1], &f), partial_word(&[2, 1, 2], &f));
        prop_assert_eq!(partial_word(&[1, 3], &f), partial_word(&[3, 1], &f));
    }

    #[test]
    fn isobaric_square(f in localized(), i in 1usize..=2) {
        let beta: LocalizedElement = Polynomial::beta().into();
        let once = pi_i(i, &f);
        prop_assert_eq!(pi_i(i, &once), -&(&beta * &once));
    }

    #[test]
    fn leibniz_rule(w in perm(3), f in poly_over(x_var(), 4), g in poly_over(x_var(), 4)) {
        let rhs = Permutation::all(3)
            .iter()
            .filter(|v| v.bruhat_leq(&w))
            .fold(Polynomial::zero(), |acc, v| acc + skew_partial(&w, v, &f) * partial_w(v, &g));
        prop_assert_eq!(partial_w(&w, &(&f * &g)), rhs);
    }

    #[test]
    fn reduced_word_independence(w in perm(4), f in poly_over(x_var(), 4)) {
        let reference = partial_w(&w, &f);
        for word in w.all_reduced_words(1000).unwrap() {
            prop_assert_eq!(partial_word(word.letters(), &f), reference.clone());
        }
    }

    #[test]
    fn solver_finds_planted_solutions(lambda in prop::collection::vec(0u32..=3, 4)) {
        let columns: Vec<Polynomial> = ["t1 - y1", "t2 - y1", "t1 - y2", "(t1 - y1)*(t2 - y2)"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let target = columns
            .iter()
            .zip(&lambda)
            .fold(Polynomial::zero(), |acc, (c, &l)| acc + c.scalar_mul(&BigInt::from(l)));
        let found = solve_nonneg_integer(&columns, &target).unwrap().unwrap();
        let rebuilt = columns.iter().zip(&found).fold(Polynomial::zero(), |acc, (c, l)| acc + c.scalar_mul(l));
        prop_assert_eq!(rebuilt, target);
    }

    #[test]
    fn products_of_differences_certify(pairs in prop::collection::vec((1u32..=3, 1u32..=3), 0..=3), scale in 1i64..=3) {
        let c = pairs.iter().fold(Polynomial::constant(scale), |acc, &(i, j)| {
            acc * (Polynomial::var(Var::T(i)) - Polynomial::var(Var::Y(j)))
        });
        match certify_schubert(&c, 3).unwrap() {
            CertifyOutcome::Certified(cert) => prop_assert!(verify_certificate(&cert, &c.into())),
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

#[test]
fn localized_denominators_are_canonical() {
    let num: Polynomial = "t1 - y1".parse().unwrap();
    let unit_y1: Polynomial = "1 + b*y1".parse().unwrap();
    let a = LocalizedElement::new(&num * &unit_y1, BTreeMap::from([(1, 2)]), BTreeMap::new());
    assert_eq!(a, LocalizedElement::new(num, BTreeMap::from([(1, 1)]), BTreeMap::new()));
}
