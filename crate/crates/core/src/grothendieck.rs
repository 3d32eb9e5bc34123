//! Double Grothendieck polynomials in the beta convention and the
//! coefficients of `G_u(x;y) * G_v(x;t)` in the basis `{G_w(x;t)}`.
//!
//! The top class of `S_n` is `prod_{i+j<=n} (x_i (-) y_j)` with
//! `a (-) b = (a - b)/(1 + b*b_)`, and `G_{w s_i} = pi_i G_w` whenever
//! `l(w s_i) < l(w)`, where `pi_i f = partial_i((1 + b*x_{i+1}) f)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

use crate::divided::pi_i;
use crate::error::{Error, Result};
use crate::permutation::Permutation;
use crate::poly::{LocalizedElement, Polynomial, Var};
use crate::schubert::{starting_ambient, Params, AMBIENT_GROWTH};

/// `a (-) b = (a - b) / (1 + b*b_)`.
pub fn ominus(a: &LocalizedElement, b: &LocalizedElement) -> Result<LocalizedElement> {
    let beta: LocalizedElement = Polynomial::beta().into();
    let unit = &LocalizedElement::one() + &(&beta * b);
    (a - b).divide(&unit)
}

/// `a (+) b = a + b + b_*a*b`.
pub fn oplus(a: &LocalizedElement, b: &LocalizedElement) -> LocalizedElement {
    let beta: LocalizedElement = Polynomial::beta().into();
    &(a + b) + &(&beta * &(a * b))
}

/// `a (-) b` for single variables, `b` in the `y` or `t` family.
pub fn var_ominus(a: Var, b: Var) -> LocalizedElement {
    let num = Polynomial::var(a) - Polynomial::var(b);
    match b {
        Var::Y(j) => LocalizedElement::new(num, BTreeMap::from([(j, 1)]), BTreeMap::new()),
        Var::T(i) => LocalizedElement::new(num, BTreeMap::new(), BTreeMap::from([(i, 1)])),
        other => panic!("(-) denominators must be y or t variables, got {other}"),
    }
}

/// `prod_{i+j <= n} (x_i (-) y_j)`.
pub fn top_class_k(n: usize) -> LocalizedElement {
    let mut num = Polynomial::one();
    let mut denom_y = BTreeMap::new();
    for i in 1..n {
        for j in 1..=n - i {
            num = &num * &(Polynomial::x(i) - Polynomial::y(j));
            *denom_y.entry(j as u32).or_insert(0) += 1;
        }
    }
    LocalizedElement::new(num, denom_y, BTreeMap::new())
}

fn ensure_fits(w: &Permutation, n: usize) -> Result<()> {
    if w.fits_in(n) {
        Ok(())
    } else {
        Err(Error::AmbientTooSmall { perm: w.to_string(), n })
    }
}

/// `G_w(x;y)` for `w` in `S_n`.
pub fn double_grothendieck(w: &Permutation, n: usize) -> Result<LocalizedElement> {
    ensure_fits(w, n)?;
    Ok(grothendieck_polynomial(w, Params::Y).as_ref().clone())
}

/// `G_w(x;y)` at ambient `n` via `pi` along the given reduced word of
/// `w^-1 w_0` (rightmost letter first), bypassing the cache.
pub fn double_grothendieck_along(w: &Permutation, n: usize, word: &[usize]) -> Result<LocalizedElement> {
    ensure_fits(w, n)?;
    let down = &w.inverse() * &Permutation::longest_element(n);
    let word = crate::permutation::ReducedWord(word.to_vec());
    if !word.is_reduced_for(&down) {
        return Err(Error::NotReduced { word: word.0, target: down.to_string() });
    }
    Ok(word.letters().iter().rev().fold(top_class_k(n), |acc, &i| pi_i(i, &acc)))
}

type GrothendieckCache = RwLock<HashMap<(Permutation, Params), Arc<LocalizedElement>>>;

static GROTHENDIECK_CACHE: LazyLock<GrothendieckCache> = LazyLock::new(Default::default);

pub fn y_to_t(f: &LocalizedElement) -> LocalizedElement {
    f.rename(|v| match v {
        Var::Y(j) => Var::T(j),
        other => other,
    })
}

/// Stable `G_w(x;y)` (or `G_w(x;t)`), memoized process-wide.
pub fn grothendieck_polynomial(w: &Permutation, params: Params) -> Arc<LocalizedElement> {
    let key = (w.clone(), params);
    if let Some(hit) = GROTHENDIECK_CACHE.read().expect("cache lock").get(&key) {
        return hit.clone();
    }
    let value = Arc::new(match params {
        Params::T => y_to_t(&grothendieck_polynomial(w, Params::Y)),
        Params::Y => {
            let m = w.size();
            if w.is_identity() {
                LocalizedElement::one()
            } else if *w == Permutation::longest_element(m) {
                top_class_k(m)
            } else {
                let i = (1..m).find(|&i| !w.has_descent(i)).expect("w is not longest in S_m");
                pi_i(i, &grothendieck_polynomial(&w.right_mul_simple(i), Params::Y))
            }
        }
    });
    GROTHENDIECK_CACHE
        .write()
        .expect("cache lock")
        .entry(key)
        .or_insert(value)
        .clone()
}

/// `x_i -> t_{v(i)}`.
pub fn restrict_to(f: &LocalizedElement, v: &Permutation) -> LocalizedElement {
    f.rename(|var| match var {
        Var::X(i) => Var::T(v.apply(i as usize) as u32),
        other => other,
    })
}

/// `G_w(vt;t)`.
pub fn localize_k(w: &Permutation, v: &Permutation) -> LocalizedElement {
    restrict_to(&grothendieck_polynomial(w, Params::T), v)
}

/// Coefficients of `p` in `{G_w(x;t) : w in S_ambient}` by localization
/// elimination in Bruhat-increasing order.
///
/// For each `v` by increasing length, the residual
/// `p(vt) - sum_{w<v} c_w G_w(vt;t)` is divided by `G_v(vt;t)`; only `w <= v`
/// contribute since `G_w(vt;t)` vanishes otherwise. The result is checked by
/// reconstruction.
pub fn expand_in_t_basis_k(
    p: &LocalizedElement,
    ambient: usize,
) -> Result<BTreeMap<Permutation, LocalizedElement>> {
    let mut coefficients: BTreeMap<Permutation, LocalizedElement> = BTreeMap::new();
    for v in Permutation::all_by_length(ambient) {
        let mut residual = restrict_to(p, &v);
        for (w, c) in &coefficients {
            if w.bruhat_leq(&v) {
                residual = &residual - &(c * &localize_k(w, &v));
            }
        }
        if residual.is_zero() {
            continue;
        }
        let diagonal = localize_k(&v, &v);
        coefficients.insert(v, residual.divide(&diagonal)?);
    }
    let mut check = p.clone();
    for (w, c) in &coefficients {
        check = &check - &(c * &grothendieck_polynomial(w, Params::T));
    }
    if check.is_zero() {
        Ok(coefficients)
    } else {
        Err(Error::ResidualNonzero { ambient })
    }
}

/// The expansion `G_u(x;y) G_v(x;t) = sum_w c~_{u,v}^w(y,t) G_w(x;t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KExpansionResult {
    pub u: Permutation,
    pub v: Permutation,
    pub ambient: usize,
    pub coefficients: BTreeMap<Permutation, LocalizedElement>,
}

impl KExpansionResult {
    pub fn coefficient(&self, w: &Permutation) -> LocalizedElement {
        self.coefficients.get(w).cloned().unwrap_or_default()
    }

    /// The `b = 0` image, coefficient by coefficient.
    pub fn beta_zero(&self) -> BTreeMap<Permutation, Polynomial> {
        self.coefficients
            .iter()
            .map(|(w, c)| (w.clone(), c.beta_zero()))
            .filter(|(_, c)| !c.is_zero())
            .collect()
    }
}

pub fn product_k(u: &Permutation, v: &Permutation) -> LocalizedElement {
    &*grothendieck_polynomial(u, Params::Y) * &*grothendieck_polynomial(v, Params::T)
}

pub fn expand_product_k(u: &Permutation, v: &Permutation) -> Result<KExpansionResult> {
    let p = product_k(u, v);
    let start = starting_ambient(u, v);
    let mut last = Error::ResidualNonzero { ambient: start };
    for ambient in start..=start + AMBIENT_GROWTH {
        match expand_in_t_basis_k(&p, ambient) {
            Ok(coefficients) => {
                return Ok(KExpansionResult { u: u.clone(), v: v.clone(), ambient, coefficients })
            }
            Err(e @ Error::ResidualNonzero { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// `c~_{u,v}^w(y,t)`.
pub fn triple_coefficient_k(u: &Permutation, v: &Permutation, w: &Permutation) -> Result<LocalizedElement> {
    Ok(expand_product_k(u, v)?.coefficient(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schubert::double_schubert;

    fn p(s: &str) -> Polynomial {
        s.parse().unwrap()
    }

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn t1_ominus_y1() -> LocalizedElement {
        var_ominus(Var::T(1), Var::Y(1))
    }

    #[test]
    fn formal_group_arithmetic() {
        let t1: LocalizedElement = p("t1").into();
        let y1: LocalizedElement = p("y1").into();
        let d = ominus(&t1, &y1).unwrap();
        assert_eq!(d, LocalizedElement::new(p("t1 - y1"), BTreeMap::from([(1, 1)]), BTreeMap::new()));
        assert!(ominus(&t1, &t1).unwrap().is_zero());
        let x1_t1 = var_ominus(Var::X(1), Var::T(1));
        assert_eq!(oplus(&x1_t1, &t1_ominus_y1()), var_ominus(Var::X(1), Var::Y(1)));
    }

    #[test]
    fn grothendieck_examples() {
        let s1 = Permutation::simple(1);
        assert_eq!(double_grothendieck(&s1, 2).unwrap(), var_ominus(Var::X(1), Var::Y(1)));
        assert_eq!(double_grothendieck_along(&Permutation::identity(), 2, &[1]).unwrap(), LocalizedElement::one());
        let w = perm("2,3,1");
        assert_eq!(
            double_grothendieck(&w, 3).unwrap().beta_zero(),
            double_schubert(&w, 3).unwrap()
        );
    }

    #[test]
    fn k_expansion_examples() {
        let s1 = Permutation::simple(1);
        let id = Permutation::identity();
        let g = grothendieck_polynomial(&s1, Params::Y);
        let expansion = expand_in_t_basis_k(&g, 2).unwrap();
        let beta: LocalizedElement = Polynomial::beta().into();
        let expected = BTreeMap::from([
            (id.clone(), t1_ominus_y1()),
            (s1.clone(), &LocalizedElement::one() + &(&beta * &t1_ominus_y1())),
        ]);
        assert_eq!(expansion, expected);
        assert_eq!(
            expand_in_t_basis_k(&LocalizedElement::one(), 2).unwrap(),
            BTreeMap::from([(id.clone(), LocalizedElement::one())])
        );
        let at_zero: BTreeMap<_, _> = expansion.iter().map(|(w, c)| (w.clone(), c.beta_zero())).collect();
        assert_eq!(at_zero, BTreeMap::from([(id, p("t1 - y1")), (s1, p("1"))]));
    }

    #[test]
    fn triple_k_examples() {
        let s1 = Permutation::simple(1);
        let id = Permutation::identity();
        assert_eq!(triple_coefficient_k(&s1, &id, &id).unwrap(), t1_ominus_y1());
        let beta: LocalizedElement = Polynomial::beta().into();
        assert_eq!(
            triple_coefficient_k(&s1, &id, &s1).unwrap(),
            &LocalizedElement::one() + &(&beta * &t1_ominus_y1())
        );
        for w in Permutation::all(3) {
            let expected = if w.is_identity() { LocalizedElement::one() } else { LocalizedElement::zero() };
            assert_eq!(triple_coefficient_k(&id, &id, &w).unwrap(), expected);
        }
    }
}
