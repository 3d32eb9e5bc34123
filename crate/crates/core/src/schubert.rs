//! Double Schubert polynomials and the structure constants of
//! `S_u(x;y) * S_v(x;t)` in the basis `{S_w(x;t)}`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

use itertools::Itertools;

use crate::divided::{partial_i, partial_word, skew_partial};
use crate::error::{Error, Result};
use crate::permutation::{Permutation, ReducedWord};
use crate::poly::{Polynomial, Var};

/// Largest window for which the basis is built from the top class by
/// descending divided differences; bigger windows use the transition
/// recursion, whose cost tracks the length instead of the window.
pub const TOP_CLASS_LIMIT: usize = 5;

/// Largest ambient accepted by the brute-force pipe dream enumeration.
pub const PIPE_DREAM_LIMIT: usize = 6;

/// How many times the ambient grows past its starting value before an
/// expansion gives up.
pub const AMBIENT_GROWTH: usize = 3;

/// Which variable family plays the role of the equivariant parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Params {
    Y,
    T,
}

impl Params {
    pub fn var(self, j: usize) -> Var {
        match self {
            Params::Y => Var::Y(j as u32),
            Params::T => Var::T(j as u32),
        }
    }
}

/// Renames every `y_j` to `t_j`.
pub fn y_to_t(p: &Polynomial) -> Polynomial {
    p.rename(|v| match v {
        Var::Y(j) => Var::T(j),
        other => other,
    })
}

/// Renames every `x_i` to `t_i`.
pub fn x_to_t(p: &Polynomial) -> Polynomial {
    p.rename(|v| match v {
        Var::X(i) => Var::T(i),
        other => other,
    })
}

fn ensure_fits(w: &Permutation, n: usize) -> Result<()> {
    if w.fits_in(n) {
        Ok(())
    } else {
        Err(Error::AmbientTooSmall { perm: w.to_string(), n })
    }
}

/// `prod_{i+j <= n} (x_i - y_j)`.
pub fn top_class(n: usize) -> Polynomial {
    let factors: Vec<Polynomial> = (1..n)
        .flat_map(|i| (1..=n - i).map(move |j| Polynomial::x(i) - Polynomial::y(j)))
        .collect();
    Polynomial::product(&factors)
}

/// `S_w(x;y)` for `w` in `S_n`.
pub fn double_schubert(w: &Permutation, n: usize) -> Result<Polynomial> {
    ensure_fits(w, n)?;
    Ok(schubert_polynomial(w, Params::Y).as_ref().clone())
}

/// `S_w(x;y)` built at ambient `n` from the top class by the descending chain
/// `partial_{w^-1 w_0}`, without touching the shared cache.
pub fn double_schubert_from_top(w: &Permutation, n: usize) -> Result<Polynomial> {
    ensure_fits(w, n)?;
    let down = &w.inverse() * &Permutation::longest_element(n);
    Ok(partial_word(down.canonical_reduced_word().letters(), &top_class(n)))
}

type SchubertCache = RwLock<HashMap<(Permutation, Params), Arc<Polynomial>>>;

static SCHUBERT_CACHE: LazyLock<SchubertCache> = LazyLock::new(Default::default);

/// Stable `S_w(x;y)` (or `S_w(x;t)`), memoized process-wide.
pub fn schubert_polynomial(w: &Permutation, params: Params) -> Arc<Polynomial> {
    let key = (w.clone(), params);
    if let Some(hit) = SCHUBERT_CACHE.read().expect("cache lock").get(&key) {
        return hit.clone();
    }
    let value = Arc::new(match params {
        Params::T => y_to_t(&schubert_polynomial(w, Params::Y)),
        Params::Y => compute_schubert(w),
    });
    SCHUBERT_CACHE
        .write()
        .expect("cache lock")
        .entry(key)
        .or_insert(value)
        .clone()
}

fn compute_schubert(w: &Permutation) -> Polynomial {
    let m = w.size();
    if w.is_identity() {
        return Polynomial::one();
    }
    if m <= TOP_CLASS_LIMIT {
        if *w == Permutation::longest_element(m) {
            return top_class(m);
        }
        let i = (1..m).find(|&i| !w.has_descent(i)).expect("w is not longest in S_m");
        return partial_i(i, &schubert_polynomial(&w.right_mul_simple(i), Params::Y));
    }
    transition(w)
}

/// Transition recursion: with `r` the last descent of `w`, `s` the last
/// position after `r` holding a smaller value, and `v = w t_{rs}`,
/// `S_w = (x_r - y_{v(r)}) S_v + sum S_{v t_{qr}}` over `q < r` with
/// `l(v t_{qr}) = l(w)`.
fn transition(w: &Permutation) -> Polynomial {
    let r = *w.descents().iter().next_back().expect("non-identity has a descent");
    let s = (r + 1..=w.size())
        .filter(|&j| w.apply(j) < w.apply(r))
        .max()
        .expect("r is a descent");
    let v = w * &Permutation::transposition(r, s);
    let factor = Polynomial::x(r) - Polynomial::y(v.apply(r));
    let mut out = &factor * &*schubert_polynomial(&v, Params::Y);
    let target = w.length();
    for q in 1..r {
        let candidate = &v * &Permutation::transposition(q, r);
        if candidate.length() == target {
            out += &*schubert_polynomial(&candidate, Params::Y);
        }
    }
    out
}

/// Reduced pipe dreams of `w` inside the staircase `{(i,j) : i+j <= n}`.
///
/// A cross at `(i,j)` contributes the letter `s_{i+j-1}`; crosses are read
/// right to left along each row, top row first, and the word must be a
/// reduced word for `w`.
pub fn pipe_dreams(w: &Permutation, n: usize) -> Result<Vec<Vec<(usize, usize)>>> {
    ensure_fits(w, n)?;
    if n > PIPE_DREAM_LIMIT {
        return Err(Error::SearchSpaceTooLarge {
            size: 1 << (n * (n - 1) / 2),
            cap: 1 << (PIPE_DREAM_LIMIT * (PIPE_DREAM_LIMIT - 1) / 2),
        });
    }
    let cells: Vec<(usize, usize)> = (1..n)
        .flat_map(|i| (1..=n - i).rev().map(move |j| (i, j)))
        .collect();
    let len = w.length();
    let mut out = Vec::new();
    'subsets: for chosen in cells.iter().copied().combinations(len) {
        let mut product = Permutation::identity();
        for &(i, j) in &chosen {
            let k = i + j - 1;
            if product.has_descent(k) {
                continue 'subsets;
            }
            product = product.right_mul_simple(k);
        }
        if product == *w {
            out.push(chosen);
        }
    }
    Ok(out)
}

/// Sum over reduced pipe dreams of `prod (x_i - y_j)`.
pub fn pipe_dream_polynomial(w: &Permutation, n: usize) -> Result<Polynomial> {
    let mut total = Polynomial::zero();
    for dream in pipe_dreams(w, n)? {
        let weights: Vec<Polynomial> = dream
            .iter()
            .map(|&(i, j)| Polynomial::x(i) - Polynomial::y(j))
            .collect();
        total += &Polynomial::product(&weights);
    }
    Ok(total)
}

/// Restriction of the class of `u` to the fixed point `w`: `x_i -> t_{w(i)}`
/// in `S_u(x;t)`.
pub fn localize(u: &Permutation, w: &Permutation, n: usize) -> Result<Polynomial> {
    ensure_fits(u, n)?;
    ensure_fits(w, n)?;
    Ok(schubert_polynomial(u, Params::T).rename(|v| match v {
        Var::X(i) => Var::T(w.apply(i as usize) as u32),
        other => other,
    }))
}

/// Subword formula for the localization of `u` at `w`, summing over
/// subwords of `word` that are reduced words for `u` the product of the roots
/// `s_{i_1} ... s_{i_{j-1}} (alpha_{i_j})`.
pub fn billey(u: &Permutation, w: &Permutation, word: &ReducedWord) -> Result<Polynomial> {
    if !word.is_reduced_for(w) {
        return Err(Error::NotReduced { word: word.0.clone(), target: w.to_string() });
    }
    let letters = word.letters();
    let mut prefixes = Vec::with_capacity(letters.len());
    let mut roots = Vec::with_capacity(letters.len());
    let mut prefix = Permutation::identity();
    for &i in letters {
        let (root, positive) = crate::permutation::RootPair::simple(i).act(&prefix);
        debug_assert!(positive, "reduced words only produce positive roots");
        roots.push(root.to_polynomial());
        prefixes.push(prefix.clone());
        prefix = prefix.right_mul_simple(i);
    }
    let target_len = u.length();
    let mut total = Polynomial::zero();
    for subset in (0..letters.len()).combinations(target_len) {
        let product = subset
            .iter()
            .fold(Permutation::identity(), |acc, &k| acc.right_mul_simple(letters[k]));
        if product == *u {
            total += &Polynomial::product(subset.iter().map(|&k| &roots[k]));
        }
    }
    Ok(total)
}

/// Coefficients of `p` in the basis `{S_w(x;t) : w in S_ambient}`.
///
/// `c_w = [partial_w p]_{x=t}`. The derivatives are generated breadth-first
/// by length, `partial_{s_i w} = partial_i partial_w`, pruning zero branches.
/// The expansion is checked by reconstruction.
pub fn expand_in_t_basis(p: &Polynomial, ambient: usize) -> Result<BTreeMap<Permutation, Polynomial>> {
    let mut coefficients = BTreeMap::new();
    let mut level: BTreeMap<Permutation, Polynomial> =
        BTreeMap::from([(Permutation::identity(), p.clone())]);
    while !level.is_empty() {
        let mut next: BTreeMap<Permutation, Polynomial> = BTreeMap::new();
        for (w, derivative) in &level {
            let c = x_to_t(derivative);
            if !c.is_zero() {
                coefficients.insert(w.clone(), c);
            }
            for i in 1..ambient {
                if w.has_left_descent(i) {
                    continue;
                }
                let up = w.left_mul_simple(i);
                if next.contains_key(&up) {
                    continue;
                }
                let d = partial_i(i, derivative);
                if !d.is_zero() {
                    next.insert(up, d);
                }
            }
        }
        level = next;
    }
    let mut residual = p.clone();
    for (w, c) in &coefficients {
        residual -= &(c * &*schubert_polynomial(w, Params::T));
    }
    if residual.is_zero() {
        Ok(coefficients)
    } else {
        Err(Error::ResidualNonzero { ambient })
    }
}

/// The expansion `S_u(x;y) S_v(x;t) = sum_w c_{u,v}^w(y,t) S_w(x;t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionResult {
    pub u: Permutation,
    pub v: Permutation,
    pub ambient: usize,
    pub coefficients: BTreeMap<Permutation, Polynomial>,
}

impl ExpansionResult {
    pub fn coefficient(&self, w: &Permutation) -> Polynomial {
        self.coefficients.get(w).cloned().unwrap_or_default()
    }
}

/// Smallest `m` with `u, v` in `S_m`, plus one.
pub fn starting_ambient(u: &Permutation, v: &Permutation) -> usize {
    u.size().max(v.size()).max(1) + 1
}

pub fn product_polynomial(u: &Permutation, v: &Permutation) -> Polynomial {
    &*schubert_polynomial(u, Params::Y) * &*schubert_polynomial(v, Params::T)
}

pub fn expand_product(u: &Permutation, v: &Permutation) -> Result<ExpansionResult> {
    expand_product_from(u, v, starting_ambient(u, v))
}

/// Expansion starting at a given ambient, growing it on a nonzero residual.
pub fn expand_product_from(u: &Permutation, v: &Permutation, start: usize) -> Result<ExpansionResult> {
    let p = product_polynomial(u, v);
    let mut last = Error::ResidualNonzero { ambient: start };
    for ambient in start..=start + AMBIENT_GROWTH {
        match expand_in_t_basis(&p, ambient) {
            Ok(coefficients) => {
                return Ok(ExpansionResult { u: u.clone(), v: v.clone(), ambient, coefficients })
            }
            Err(e @ Error::ResidualNonzero { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// `partial_{w/v} S_u(x;y)` with `x` renamed to `t`.
pub fn skew_route(u: &Permutation, v: &Permutation, w: &Permutation) -> Polynomial {
    x_to_t(&skew_partial(w, v, &schubert_polynomial(u, Params::Y)))
}

/// `c_{u,v}^w(y,t)`, computed by basis extraction and by the skew divided
/// difference identity; the two must agree.
pub fn triple_coefficient(u: &Permutation, v: &Permutation, w: &Permutation) -> Result<Polynomial> {
    let extracted = expand_product(u, v)?.coefficient(w);
    let skew = skew_route(u, v, w);
    if extracted != skew {
        return Err(Error::InternalMismatch(format!(
            "c[{u};{v};{w}]: extraction gives {extracted}, skew route gives {skew}"
        )));
    }
    Ok(extracted)
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
    fn schubert_examples() {
        assert_eq!(double_schubert(&Permutation::simple(1), 2).unwrap(), p("x1 - y1"));
        assert_eq!(double_schubert(&Permutation::identity(), 3).unwrap(), p("1"));
        assert_eq!(double_schubert(&perm("2,3,1"), 3).unwrap(), p("(x1 - y1)*(x2 - y1)"));
        assert!(matches!(
            double_schubert(&perm("3,2,1"), 2),
            Err(Error::AmbientTooSmall { .. })
        ));
    }

    #[test]
    fn transition_matches_top_class_in_s5() {
        for w in Permutation::all(5) {
            assert_eq!(transition_or_one(&w), double_schubert_from_top(&w, 5).unwrap(), "{w}");
        }
    }

    fn transition_or_one(w: &Permutation) -> Polynomial {
        if w.is_identity() {
            Polynomial::one()
        } else {
            transition(w)
        }
    }

    #[test]
    fn pipe_dream_examples() {
        assert_eq!(pipe_dreams(&perm("2,3,1"), 3).unwrap(), vec![vec![(1, 1), (2, 1)]]);
        assert_eq!(pipe_dream_polynomial(&perm("2,3,1"), 3).unwrap(), p("(x1-y1)*(x2-y1)"));
        assert_eq!(pipe_dream_polynomial(&Permutation::identity(), 3).unwrap(), p("1"));
        assert_eq!(pipe_dreams(&perm("1,3,2"), 3).unwrap().len(), 2);
        assert_eq!(pipe_dream_polynomial(&perm("1,3,2"), 3).unwrap(), p("x1 - y2 + x2 - y1"));
    }

    #[test]
    fn localization_examples() {
        let s1 = Permutation::simple(1);
        assert_eq!(localize(&s1, &s1, 2).unwrap(), p("t2 - t1"));
        for w in Permutation::all(3) {
            assert_eq!(localize(&Permutation::identity(), &w, 3).unwrap(), p("1"));
        }
        assert!(localize(&perm("3,1,2"), &s1, 3).unwrap().is_zero());
    }

    #[test]
    fn billey_examples() {
        let s1 = Permutation::simple(1);
        assert_eq!(billey(&s1, &s1, &ReducedWord(vec![1])).unwrap(), p("t2 - t1"));
        assert_eq!(
            billey(&Permutation::simple(2), &perm("2,3,1"), &ReducedWord(vec![1, 2])).unwrap(),
            p("t3 - t1")
        );
        assert!(billey(&s1, &Permutation::simple(2), &ReducedWord(vec![2])).unwrap().is_zero());
        assert!(matches!(
            billey(&s1, &perm("2,3,1"), &ReducedWord(vec![2, 1])),
            Err(Error::NotReduced { .. })
        ));
    }

    #[test]
    fn expansion_examples() {
        let s1 = Permutation::simple(1);
        let basis = schubert_polynomial(&s1, Params::T);
        assert_eq!(expand_in_t_basis(&basis, 2).unwrap(), BTreeMap::from([(s1.clone(), p("1"))]));
        let expansion = expand_in_t_basis(&p("(x1 - y1)*(x1 - t1)"), 3).unwrap();
        assert_eq!(
            expansion,
            BTreeMap::from([(perm("3,1,2"), p("1")), (s1.clone(), p("t2 - y1"))])
        );
        assert_eq!(
            expand_in_t_basis(&p("1"), 2).unwrap(),
            BTreeMap::from([(Permutation::identity(), p("1"))])
        );
        assert!(matches!(
            expand_in_t_basis(&p("x1^2"), 2),
            Err(Error::ResidualNonzero { ambient: 2 })
        ));
    }

    #[test]
    fn triple_examples() {
        let s1 = Permutation::simple(1);
        assert_eq!(triple_coefficient(&s1, &s1, &s1).unwrap(), p("t2 - y1"));
        assert!(triple_coefficient(&s1, &s1, &Permutation::identity()).unwrap().is_zero());
        let c = triple_coefficient(&s1, &s1, &perm("3,1,2")).unwrap();
        assert_eq!(c.vanish(|v| matches!(v, Var::Y(_) | Var::T(_))), p("1"));
    }
}
