//! Runtime invariant suites, one group per module. Randomized checks draw
//! from a seeded generator, so a run is reproducible from its seed.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::divided::{apply_perm_x, partial_i, partial_w, partial_word, pi_i, skew_partial};
use crate::error::Result;
use crate::grothendieck::{
    double_grothendieck, double_grothendieck_along, expand_product_k, grothendieck_polynomial, localize_k,
};
use crate::permutation::{Permutation, RootPair};
use crate::poly::{LocalizedElement, Monomial, Polynomial, Var};
use crate::positivity::{certify_billey, certify_schubert, quick_screen, verify_certificate, QUICK_SCREEN_SAMPLES};
use crate::schubert::{
    billey, double_schubert, expand_product, expand_product_from, localize, pipe_dream_polynomial, product_polynomial,
    schubert_polynomial, triple_coefficient, x_to_t, Params,
};

pub const DEFAULT_SEED: u64 = 20_240_917;
const MAX_REPORTED: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub module: &'static str,
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Recorder {
    cases: usize,
    failures: Vec<String>,
    total_failures: usize,
}

impl Recorder {
    fn expect(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.total_failures += 1;
            if self.failures.len() < MAX_REPORTED {
                self.failures.push(describe());
            }
        }
    }
}

fn check(module: &'static str, name: &'static str, body: impl FnOnce(&mut Recorder) -> Result<()>) -> Check {
    let mut rec = Recorder { cases: 0, failures: Vec::new(), total_failures: 0 };
    if let Err(e) = body(&mut rec) {
        rec.failures.push(format!("error: {e}"));
        rec.total_failures += 1;
    }
    if rec.total_failures > rec.failures.len() {
        rec.failures.push(format!("... {} failures in total", rec.total_failures));
    }
    Check { module, name, cases: rec.cases, failures: rec.failures }
}

pub fn run_all(seed: u64) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = permutation_checks();
    out.extend(polynomial_checks(&mut rng));
    out.extend(divided_difference_checks(&mut rng));
    out.extend(schubert_checks(&mut rng));
    out.extend(grothendieck_checks());
    out.extend(positivity_checks());
    out
}

/// Bruhat order by the tableau criterion: `u <= v` iff for every `k` the
/// sorted values `u(1..k)` are entrywise at most the sorted `v(1..k)`.
pub fn bruhat_leq_tableau(u: &Permutation, v: &Permutation) -> bool {
    let n = u.size().max(v.size());
    let (a, b) = (u.one_line(n), v.one_line(n));
    (1..n).all(|k| {
        let mut pa = a[..k].to_vec();
        let mut pb = b[..k].to_vec();
        pa.sort_unstable();
        pb.sort_unstable();
        pa.iter().zip(&pb).all(|(x, y)| x <= y)
    })
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Permutation {
    let mut one_line: Vec<usize> = (1..=n).collect();
    one_line.shuffle(rng);
    Permutation::new(&one_line).expect("a shuffle is a permutation")
}

/// A random polynomial with up to `max_terms` terms in `x1..x3`, `y1, y2`,
/// `t1, t2` and optionally `b`.
pub fn random_polynomial(rng: &mut impl Rng, max_terms: usize, with_beta: bool) -> Polynomial {
    let mut vars = vec![Var::X(1), Var::X(2), Var::X(3), Var::Y(1), Var::Y(2), Var::T(1), Var::T(2)];
    if with_beta {
        vars.push(Var::Beta);
    }
    let terms = rng.gen_range(0..=max_terms);
    Polynomial::from_terms((0..terms).map(|_| {
        let factors = (0..rng.gen_range(0..=3)).map(|_| (*vars.choose(rng).unwrap(), rng.gen_range(1..=2)));
        (Monomial::from_pairs(factors), BigInt::from(rng.gen_range(-4..=4)))
    }))
}

pub fn random_localized(rng: &mut impl Rng, max_terms: usize) -> LocalizedElement {
    let denom_y: BTreeMap<u32, u32> = (1..=2).map(|j| (j, rng.gen_range(0..=2))).filter(|&(_, e)| e > 0).collect();
    let denom_t: BTreeMap<u32, u32> = (1..=2).map(|i| (i, rng.gen_range(0..=1))).filter(|&(_, e)| e > 0).collect();
    LocalizedElement::new(random_polynomial(rng, max_terms, true), denom_y, denom_t)
}

pub fn permutation_checks() -> Vec<Check> {
    const M: &str = "permutations";
    let s4 = Permutation::all(4);
    vec![
        check(M, "lehmer code round trip on S_4", |r| {
            for w in &s4 {
                r.expect(Permutation::from_lehmer_code(&w.lehmer_code())? == *w, || w.to_string());
            }
            Ok(())
        }),
        check(M, "length = inversions = code sum on S_4", |r| {
            for w in &s4 {
                let l = w.length();
                r.expect(
                    l == w.inversion_pairs().len() && l == w.lehmer_code().iter().sum::<usize>(),
                    || w.to_string(),
                );
            }
            Ok(())
        }),
        check(M, "reduced words multiply back on S_4", |r| {
            for w in &s4 {
                for word in w.all_reduced_words(10_000)? {
                    r.expect(word.product() == *w && word.len() == w.length(), || format!("{w} {word}"));
                }
            }
            Ok(())
        }),
        check(M, "bruhat order matches the tableau criterion on S_4", |r| {
            for u in &s4 {
                for v in &s4 {
                    let leq = u.bruhat_leq(v);
                    r.expect(leq == bruhat_leq_tableau(u, v), || format!("{u} <= {v}"));
                    r.expect(!leq || u.length() <= v.length(), || format!("length {u} {v}"));
                    r.expect(!(leq && v.bruhat_leq(u)) || u == v, || format!("antisymmetry {u} {v}"));
                }
                r.expect(u.bruhat_leq(u), || format!("reflexivity {u}"));
            }
            Ok(())
        }),
        check(M, "inversion set of tau(n) is {y_j - t_i}", |r| {
            for n in 1..=3 {
                r.expect(tau_inversions_ok(n), || format!("n = {n}"));
            }
            Ok(())
        }),
    ]
}

/// Renders `I(tau(n))` with `t_{n+j}` renamed to `y_j` and compares with
/// `{y_j - t_i : 1 <= i, j <= n}`.
pub fn tau_inversions_ok(n: usize) -> bool {
    let rename = |v: Var| match v {
        Var::T(k) if k as usize > n => Var::Y(k - n as u32),
        other => other,
    };
    let rendered: std::collections::BTreeSet<String> = Permutation::tau(n)
        .inversion_pairs()
        .iter()
        .map(|r: &RootPair| r.to_polynomial().rename(rename).render())
        .collect();
    let expected: std::collections::BTreeSet<String> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (Polynomial::y(j) - Polynomial::t(i)).render()))
        .collect();
    rendered == expected
}

pub fn polynomial_checks(rng: &mut impl Rng) -> Vec<Check> {
    const M: &str = "polynomials";
    const CASES: usize = 200;
    vec![
        check(M, "ring axioms", |r| {
            for _ in 0..CASES {
                let (a, b, c) = (random_polynomial(rng, 4, true), random_polynomial(rng, 4, true), random_polynomial(rng, 4, true));
                r.expect(&(&a + &b) + &c == &a + &(&b + &c), || format!("add assoc {a} | {b} | {c}"));
                r.expect(&(&a * &b) * &c == &a * &(&b * &c), || format!("mul assoc {a} | {b} | {c}"));
                r.expect(&a * &b == &b * &a, || format!("mul comm {a} | {b}"));
                r.expect(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || format!("distrib {a} | {b} | {c}"));
            }
            Ok(())
        }),
        check(M, "exact division undoes multiplication", |r| {
            for _ in 0..CASES {
                let (a, b) = (random_polynomial(rng, 4, true), random_polynomial(rng, 3, true));
                if b.is_zero() {
                    continue;
                }
                r.expect((&a * &b).exact_divide(&b).as_ref() == Ok(&a), || format!("{a} | {b}"));
            }
            Ok(())
        }),
        check(M, "parse inverts render", |r| {
            for _ in 0..CASES {
                let a = random_polynomial(rng, 5, true);
                r.expect(Polynomial::parse(&a.render()).as_ref() == Ok(&a), || a.render());
            }
            Ok(())
        }),
        check(M, "localized arithmetic", |r| {
            for _ in 0..CASES {
                let (a, b) = (random_localized(rng, 3), random_localized(rng, 3));
                r.expect(a.clone().reduced() == a, || format!("idempotent {a}"));
                r.expect((&a + &b).beta_zero() == &a.beta_zero() + &b.beta_zero(), || format!("b=0 add {a} | {b}"));
                r.expect((&a - &b).beta_zero() == &a.beta_zero() - &b.beta_zero(), || format!("b=0 sub {a} | {b}"));
                r.expect((&a * &b).beta_zero() == &a.beta_zero() * &b.beta_zero(), || format!("b=0 mul {a} | {b}"));
                let (p, q) = (random_polynomial(rng, 3, true), random_polynomial(rng, 3, true));
                let (lp, lq): (LocalizedElement, LocalizedElement) = (p.clone().into(), q.clone().into());
                r.expect(&lp + &lq == (&p + &q).into() && &lp * &lq == (&p * &q).into(), || format!("{p} | {q}"));
            }
            Ok(())
        }),
    ]
}

pub fn divided_difference_checks(rng: &mut impl Rng) -> Vec<Check> {
    const M: &str = "divided_differences";
    const CASES: usize = 100;
    vec![
        check(M, "nil-Coxeter relations", |r| {
            for _ in 0..CASES {
                let f = random_polynomial(rng, 5, true);
                for i in 1..=2 {
                    r.expect(partial_i(i, &partial_i(i, &f)).is_zero(), || format!("square {i} {f}"));
                }
                r.expect(partial_word(&[1, 2, 1], &f) == partial_word(&[2, 1, 2], &f), || format!("braid {f}"));
            }
            Ok(())
        }),
        check(M, "partial_w is independent of the reduced word on S_4", |r| {
            for w in Permutation::all(4) {
                let f = random_polynomial(rng, 5, false);
                let reference = partial_w(&w, &f);
                for word in w.all_reduced_words(10_000)? {
                    r.expect(partial_word(word.letters(), &f) == reference, || format!("{w} {word} {f}"));
                }
            }
            Ok(())
        }),
        check(M, "Leibniz rule for skew divided differences on S_3", |r| {
            let s3 = Permutation::all(3);
            for _ in 0..CASES {
                let w = s3.choose(rng).unwrap();
                let (f, g) = (random_polynomial(rng, 3, false), random_polynomial(rng, 3, false));
                let lhs = partial_w(w, &(&f * &g));
                let rhs = s3
                    .iter()
                    .filter(|v| v.bruhat_leq(w))
                    .fold(Polynomial::zero(), |acc, v| acc + skew_partial(w, v, &f) * partial_w(v, &g));
                r.expect(lhs == rhs, || format!("{w} {f} | {g}"));
            }
            Ok(())
        }),
        check(M, "skew divided differences at the ends of the interval", |r| {
            for w in Permutation::all(3) {
                let f = random_polynomial(rng, 4, true);
                r.expect(skew_partial(&w, &Permutation::identity(), &f) == partial_w(&w, &f), || format!("{w} id {f}"));
                r.expect(skew_partial(&w, &w, &f) == apply_perm_x(&w, &f), || format!("{w} {w} {f}"));
            }
            Ok(())
        }),
        check(M, "pi_i squared is -b pi_i", |r| {
            let beta: LocalizedElement = Polynomial::beta().into();
            for _ in 0..CASES {
                let f = random_localized(rng, 3);
                for i in 1..=2 {
                    let once = pi_i(i, &f);
                    r.expect(pi_i(i, &once) == -&(&beta * &once), || format!("{i} {f}"));
                }
            }
            Ok(())
        }),
    ]
}

pub fn schubert_checks(rng: &mut impl Rng) -> Vec<Check> {
    const M: &str = "schubert";
    const RANDOM_PAIRS: usize = 20;
    let s3 = Permutation::all(3);
    let s4 = Permutation::all(4);
    vec![
        check(M, "pipe dreams reproduce double Schubert polynomials on S_4", |r| {
            for w in &s4 {
                r.expect(pipe_dream_polynomial(w, 4)? == double_schubert(w, 4)?, || w.to_string());
            }
            Ok(())
        }),
        check(M, "divided differences walk down the Schubert basis on S_4", |r| {
            for w in &s4 {
                let s = double_schubert(w, 4)?;
                for i in 1..4 {
                    let expected = if w.has_descent(i) { double_schubert(&w.right_mul_simple(i), 4)? } else { Polynomial::zero() };
                    r.expect(partial_i(i, &s) == expected, || format!("{w} {i}"));
                }
            }
            Ok(())
        }),
        check(M, "S_w(t;t) vanishes off the identity on S_4", |r| {
            for w in &s4 {
                let at = x_to_t(&schubert_polynomial(w, Params::T));
                let expected = if w.is_identity() { Polynomial::one() } else { Polynomial::zero() };
                r.expect(at == expected, || w.to_string());
            }
            Ok(())
        }),
        check(M, "localization vanishing and subword formula on S_4", |r| {
            for u in &s4 {
                for w in &s4 {
                    let loc = localize(u, w, 4)?;
                    r.expect(u.bruhat_leq(w) || loc.is_zero(), || format!("vanishing {u} {w}"));
                    for word in w.all_reduced_words(10_000)? {
                        r.expect(billey(u, w, &word)? == loc, || format!("{u} {w} {word}"));
                    }
                }
            }
            Ok(())
        }),
        check(M, "expansions reconstruct the product", |r| {
            let mut pairs: Vec<(Permutation, Permutation)> =
                s3.iter().flat_map(|u| s3.iter().map(move |v| (u.clone(), v.clone()))).collect();
            pairs.extend((0..RANDOM_PAIRS).map(|_| (random_permutation(rng, 4), random_permutation(rng, 4))));
            for (u, v) in pairs {
                let e = expand_product(&u, &v)?;
                let sum = e.coefficients.iter().fold(Polynomial::zero(), |acc, (w, c)| {
                    acc + c * &*schubert_polynomial(w, Params::T)
                });
                r.expect(sum == product_polynomial(&u, &v), || format!("{u} {v}"));
            }
            Ok(())
        }),
        check(M, "coefficients are homogeneous of the expected degree on S_3", |r| {
            for u in &s3 {
                for v in &s3 {
                    for (w, c) in expand_product(u, v)?.coefficients {
                        let expected = (u.length() + v.length()) as i64 - w.length() as i64;
                        r.expect(c.homogeneous_degree(|_| 1) == Some(expected), || format!("{u} {v} {w}"));
                    }
                }
            }
            Ok(())
        }),
        check(M, "extraction and skew routes agree on S_3", |r| {
            for u in &s3 {
                for v in &s3 {
                    for w in &s3 {
                        r.expect(triple_coefficient(u, v, w).is_ok(), || format!("{u} {v} {w}"));
                    }
                }
            }
            Ok(())
        }),
        check(M, "coefficients are stable under a larger ambient", |r| {
            for _ in 0..RANDOM_PAIRS {
                let (u, v) = (random_permutation(rng, 4), random_permutation(rng, 4));
                let e = expand_product(&u, &v)?;
                let grown = expand_product_from(&u, &v, e.ambient + 1)?;
                r.expect(e.coefficients == grown.coefficients, || format!("{u} {v}"));
            }
            Ok(())
        }),
    ]
}

pub fn grothendieck_checks() -> Vec<Check> {
    const M: &str = "grothendieck";
    let s3 = Permutation::all(3);
    vec![
        check(M, "b = 0 gives double Schubert polynomials on S_4", |r| {
            for w in Permutation::all(4) {
                r.expect(double_grothendieck(&w, 4)?.beta_zero() == double_schubert(&w, 4)?, || w.to_string());
            }
            Ok(())
        }),
        check(M, "pi chains from the top class agree on S_3", |r| {
            for n in 3..=4 {
                let w0 = Permutation::longest_element(n);
                for w in &s3 {
                    let reference = double_grothendieck(w, n)?;
                    for word in (&w.inverse() * &w0).all_reduced_words(10_000)? {
                        r.expect(double_grothendieck_along(w, n, word.letters())? == reference, || format!("{w} {word}"));
                    }
                }
            }
            Ok(())
        }),
        check(M, "localization vanishing on S_3", |r| {
            for w in &s3 {
                for v in &s3 {
                    r.expect(w.bruhat_leq(v) || localize_k(w, v).is_zero(), || format!("{w} {v}"));
                }
            }
            Ok(())
        }),
        check(M, "K-expansions reconstruct and reduce at b = 0 on S_3", |r| {
            for u in &s3 {
                for v in &s3 {
                    let e = expand_product_k(u, v)?;
                    let mut sum = LocalizedElement::zero();
                    for (w, c) in &e.coefficients {
                        sum = &sum + &(c * &*grothendieck_polynomial(w, Params::T));
                    }
                    let product = &*grothendieck_polynomial(u, Params::Y) * &*grothendieck_polynomial(v, Params::T);
                    r.expect(sum == product, || format!("reconstruction {u} {v}"));
                    r.expect(e.beta_zero() == expand_product(u, v)?.coefficients, || format!("b = 0 {u} {v}"));
                }
            }
            Ok(())
        }),
    ]
}

pub fn positivity_checks() -> Vec<Check> {
    const M: &str = "positivity";
    let s3 = Permutation::all(3);
    vec![
        check(M, "every nonzero coefficient on S_3 is certified", |r| {
            for u in &s3 {
                for v in &s3 {
                    let e = expand_product(u, v)?;
                    for (w, c) in &e.coefficients {
                        let outcome = certify_schubert(c, e.ambient)?;
                        let ok = outcome.certificate().is_some_and(|cert| verify_certificate(cert, &c.clone().into()));
                        r.expect(ok, || format!("{u} {v} {w}: {outcome:?}"));
                        r.expect(quick_screen(c, e.ambient, QUICK_SCREEN_SAMPLES), || format!("screen {u} {v} {w}"));
                        r.expect(certify_schubert(c, e.ambient)? == outcome, || format!("determinism {u} {v} {w}"));
                    }
                }
            }
            Ok(())
        }),
        check(M, "localizations on S_3 are certified in their inversion roots", |r| {
            for u in &s3 {
                for w in &s3 {
                    let outcome = certify_billey(&localize(u, w, 3)?, &w.inversion_pairs())?;
                    r.expect(outcome.is_certified(), || format!("{u} {w}: {outcome:?}"));
                }
            }
            Ok(())
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tableau_criterion_examples() {
        let p = |s: &str| s.parse::<Permutation>().unwrap();
        assert!(bruhat_leq_tableau(&p("1,3,2"), &p("2,3,1")));
        assert!(!bruhat_leq_tableau(&p("2,1,3"), &p("1,3,2")));
    }

    #[test]
    fn full_suite_passes() {
        for c in run_all(DEFAULT_SEED) {
            assert!(c.passed(), "{}::{} failed: {:?}", c.module, c.name, c.failures);
            assert!(c.cases > 0, "{}::{} ran no cases", c.module, c.name);
        }
    }
}
