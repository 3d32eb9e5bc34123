//! Finite-window permutations of the positive integers.
//!
//! A [`Permutation`] is an element of `S_inf` that moves only finitely many
//! points. It is stored in one-line notation with trailing fixed points
//! trimmed, so equality of windows is equality of group elements.
//!
//! Composition is `(u * v)(i) = u(v(i))`. A word `(i_1, ..., i_l)` denotes the
//! product `s_{i_1} * ... * s_{i_l}`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{Polynomial, Var};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Permutation {
    window: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from one-line notation of `1..=m`.
    pub fn new(one_line: &[usize]) -> Result<Self> {
        let m = one_line.len();
        let mut seen = vec![false; m + 1];
        for &value in one_line {
            if value == 0 || value > m || seen[value] {
                return Err(Error::NotAPermutation(format!("{one_line:?}")));
            }
            seen[value] = true;
        }
        Ok(Self::from_window_unchecked(one_line.to_vec()))
    }

    fn from_window_unchecked(mut window: Vec<usize>) -> Self {
        while window.last().is_some_and(|&v| v == window.len()) {
            window.pop();
        }
        Self { window }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    /// The simple transposition `s_i = (i i+1)`.
    pub fn simple(i: usize) -> Self {
        assert!(i >= 1, "simple transpositions are indexed from 1");
        let mut window: Vec<usize> = (1..=i + 1).collect();
        window.swap(i - 1, i);
        Self { window }
    }

    /// The transposition exchanging positions `a` and `b`.
    pub fn transposition(a: usize, b: usize) -> Self {
        let m = a.max(b);
        let mut window: Vec<usize> = (1..=m).collect();
        window.swap(a - 1, b - 1);
        Self::from_window_unchecked(window)
    }

    /// `[n, n-1, ..., 1]`.
    pub fn longest_element(n: usize) -> Self {
        Self::from_window_unchecked((1..=n).rev().collect())
    }

    /// The permutation of `S_2n` with `i -> n+i` and `n+i -> i`.
    pub fn tau(n: usize) -> Self {
        let window = (1..=n).map(|i| n + i).chain(1..=n).collect();
        Self::from_window_unchecked(window)
    }

    pub fn window(&self) -> &[usize] {
        &self.window
    }

    /// Smallest `m` with `self` in `S_m` (0 for the identity).
    pub fn size(&self) -> usize {
        self.window.len()
    }

    pub fn is_identity(&self) -> bool {
        self.window.is_empty()
    }

    pub fn fits_in(&self, n: usize) -> bool {
        self.size() <= n
    }

    /// Image of `i` (1-based); points beyond the window are fixed.
    pub fn apply(&self, i: usize) -> usize {
        if i >= 1 && i <= self.window.len() {
            self.window[i - 1]
        } else {
            i
        }
    }

    /// One-line notation padded with fixed points to length `n`.
    pub fn one_line(&self, n: usize) -> Vec<usize> {
        (1..=n.max(self.size())).map(|i| self.apply(i)).collect()
    }

    pub fn inverse(&self) -> Self {
        let mut window = vec![0; self.size()];
        for (i, &v) in self.window.iter().enumerate() {
            window[v - 1] = i + 1;
        }
        Self { window }
    }

    pub fn length(&self) -> usize {
        self.lehmer_code().iter().sum()
    }

    /// `code_i = #{j > i : w(j) < w(i)}` over the window.
    pub fn lehmer_code(&self) -> Vec<usize> {
        let w = &self.window;
        (0..w.len())
            .map(|i| w[i + 1..].iter().filter(|&&x| x < w[i]).count())
            .collect()
    }

    pub fn from_lehmer_code(code: &[usize]) -> Result<Self> {
        let m = code.len();
        let mut available: Vec<usize> = (1..=m).collect();
        let mut window = Vec::with_capacity(m);
        for (i, &c) in code.iter().enumerate() {
            if c > m - 1 - i {
                return Err(Error::InvalidCode(format!(
                    "entry {} at position {} exceeds {}",
                    c,
                    i + 1,
                    m - 1 - i
                )));
            }
            window.push(available.remove(c));
        }
        Ok(Self::from_window_unchecked(window))
    }

    /// Right descents `{i : w(i) > w(i+1)}`.
    pub fn descents(&self) -> BTreeSet<usize> {
        (1..self.size()).filter(|&i| self.has_descent(i)).collect()
    }

    pub fn has_descent(&self, i: usize) -> bool {
        self.apply(i) > self.apply(i + 1)
    }

    /// `i` is a left descent iff `l(s_i w) < l(w)`, i.e. `i+1` appears
    /// before `i` in one-line notation.
    pub fn has_left_descent(&self, i: usize) -> bool {
        self.inverse().has_descent(i)
    }

    pub fn left_descents(&self) -> BTreeSet<usize> {
        self.inverse().descents()
    }

    /// `s_i * self` (swaps the values `i` and `i+1`).
    pub fn left_mul_simple(&self, i: usize) -> Self {
        let m = self.size().max(i + 1);
        let window = (1..=m)
            .map(|k| match self.apply(k) {
                v if v == i => i + 1,
                v if v == i + 1 => i,
                v => v,
            })
            .collect();
        Self::from_window_unchecked(window)
    }

    /// `self * s_i` (swaps the positions `i` and `i+1`).
    pub fn right_mul_simple(&self, i: usize) -> Self {
        let mut window = self.one_line(i + 1);
        window.swap(i - 1, i);
        Self::from_window_unchecked(window)
    }

    /// Repeatedly peels the smallest left descent.
    pub fn canonical_reduced_word(&self) -> ReducedWord {
        let mut letters = Vec::with_capacity(self.length());
        let mut rest = self.clone();
        while let Some(&i) = rest.left_descents().iter().next() {
            letters.push(i);
            rest = rest.left_mul_simple(i);
        }
        ReducedWord(letters)
    }

    pub fn all_reduced_words(&self, limit: usize) -> Result<BTreeSet<ReducedWord>> {
        let mut out = BTreeSet::new();
        let mut prefix = Vec::with_capacity(self.length());
        collect_words(self, &mut prefix, &mut out, limit)?;
        Ok(out)
    }

    /// Bruhat order by the subword property, walking the canonical word of
    /// `other` one left descent at a time: if `s` is a left descent of `v`
    /// then `u <= v` iff `min(u, s u) <= s v`.
    pub fn bruhat_leq(&self, other: &Permutation) -> bool {
        let mut u = self.clone();
        let mut v = other.clone();
        loop {
            if u.is_identity() {
                return true;
            }
            if u.length() > v.length() {
                return false;
            }
            let Some(&s) = v.left_descents().iter().next() else {
                return false;
            };
            if u.has_left_descent(s) {
                u = u.left_mul_simple(s);
            }
            v = v.left_mul_simple(s);
        }
    }

    /// Left inversions `{(i,j) : i < j, w^-1(i) > w^-1(j)}`.
    pub fn inversion_pairs(&self) -> BTreeSet<RootPair> {
        let inv = self.inverse();
        let m = self.size();
        (1..=m)
            .tuple_combinations()
            .filter(|&(i, j)| inv.apply(i) > inv.apply(j))
            .map(|(i, j)| RootPair::new(i, j))
            .collect()
    }

    /// Complement of the inversion pairs among `i < j <= ambient`.
    pub fn noninversion_pairs(&self, ambient: usize) -> BTreeSet<RootPair> {
        let inversions = self.inversion_pairs();
        (1..=ambient.max(self.size()))
            .tuple_combinations()
            .map(|(i, j)| RootPair::new(i, j))
            .filter(|p| !inversions.contains(p))
            .collect()
    }

    /// All of `S_n` in lexicographic order of one-line notation.
    pub fn all(n: usize) -> Vec<Permutation> {
        (1..=n)
            .permutations(n)
            .map(Self::from_window_unchecked)
            .collect()
    }

    /// All of `S_n` sorted by length, then lexicographically.
    pub fn all_by_length(n: usize) -> Vec<Permutation> {
        let mut perms = Self::all(n);
        perms.sort_by_cached_key(|p| (p.length(), p.one_line(n)));
        perms
    }
}

fn collect_words(
    w: &Permutation,
    prefix: &mut Vec<usize>,
    out: &mut BTreeSet<ReducedWord>,
    limit: usize,
) -> Result<()> {
    if w.is_identity() {
        if out.len() >= limit {
            return Err(Error::TooManyWords { limit });
        }
        out.insert(ReducedWord(prefix.clone()));
        return Ok(());
    }
    for i in w.left_descents() {
        prefix.push(i);
        collect_words(&w.left_mul_simple(i), prefix, out, limit)?;
        prefix.pop();
    }
    Ok(())
}

impl Mul for &Permutation {
    type Output = Permutation;

    fn mul(self, rhs: &Permutation) -> Permutation {
        let m = self.size().max(rhs.size());
        Permutation::from_window_unchecked((1..=m).map(|i| self.apply(rhs.apply(i))).collect())
    }
}

impl Mul for Permutation {
    type Output = Permutation;

    fn mul(self, rhs: Permutation) -> Permutation {
        &self * &rhs
    }
}

/// Lexicographic order on one-line notation (windows padded with fixed points).
impl Ord for Permutation {
    fn cmp(&self, other: &Self) -> Ordering {
        let m = self.size().max(other.size());
        (1..=m)
            .map(|i| self.apply(i).cmp(&other.apply(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl PartialOrd for Permutation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            write!(f, "1")
        } else {
            write!(f, "{}", self.window.iter().join(","))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}]")
    }
}

/// Accepts one-line notation (`3,1,2`), a word in simple transpositions
/// (`s1 s2`, read as the product `s_1 * s_2`) or `id`.
impl FromStr for Permutation {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "id" || text == "e" {
            return Ok(Self::identity());
        }
        if text.starts_with('s') {
            let mut product = Self::identity();
            for token in text.split(|c: char| c.is_whitespace() || c == '*') {
                if token.is_empty() {
                    continue;
                }
                let i = token
                    .strip_prefix('s')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| Error::NotAPermutation(text.to_string()))?;
                product = &product * &Self::simple(i);
            }
            return Ok(product);
        }
        let values = text
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| Error::NotAPermutation(text.to_string()))?;
        Self::new(&values)
    }
}

impl Serialize for Permutation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// A sequence of simple-generator indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ReducedWord(pub Vec<usize>);

impl ReducedWord {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> Permutation {
        self.0
            .iter()
            .fold(Permutation::identity(), |acc, &i| acc.right_mul_simple(i))
    }

    pub fn is_reduced_for(&self, target: &Permutation) -> bool {
        self.len() == target.length() && &self.product() == target
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.0.iter().join(","))
    }
}

impl FromStr for ReducedWord {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim().trim_start_matches('(').trim_end_matches(')');
        if text.trim().is_empty() {
            return Ok(Self::default());
        }
        text.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.trim_start_matches('s')
                    .parse::<usize>()
                    .ok()
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| Error::NotAPermutation(text.to_string()))
            })
            .collect::<Result<Vec<_>>>()
            .map(ReducedWord)
    }
}

/// A positive root of type A, the pair `(i, j)` with `i < j`, rendered as
/// `t_j - t_i` (so the simple root `alpha_i` is `t_{i+1} - t_i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RootPair {
    pub i: usize,
    pub j: usize,
}

impl RootPair {
    pub fn new(i: usize, j: usize) -> Self {
        assert!(i < j, "root pair needs i < j, got ({i},{j})");
        Self { i, j }
    }

    pub fn simple(i: usize) -> Self {
        Self::new(i, i + 1)
    }

    /// Image of the root `t_j - t_i` under `w`, as a signed root.
    pub fn act(&self, w: &Permutation) -> (RootPair, bool) {
        let (a, b) = (w.apply(self.i), w.apply(self.j));
        if a < b {
            (RootPair::new(a, b), true)
        } else {
            (RootPair::new(b, a), false)
        }
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::var(Var::T(self.j as u32)) - Polynomial::var(Var::T(self.i as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn construction_trims_fixed_points() {
        assert_eq!(Permutation::new(&[2, 1, 3]).unwrap().window(), &[2, 1]);
        assert!(Permutation::new(&[1, 2, 3]).unwrap().is_identity());
        assert_eq!(Permutation::new(&[3, 4, 1, 2]).unwrap().window(), &[3, 4, 1, 2]);
    }

    #[test]
    fn construction_rejects_non_bijections() {
        assert!(matches!(Permutation::new(&[1, 1, 2]), Err(Error::NotAPermutation(_))));
        assert!(matches!(Permutation::new(&[1, 3]), Err(Error::NotAPermutation(_))));
        assert!(matches!(Permutation::new(&[0, 1]), Err(Error::NotAPermutation(_))));
    }

    #[test]
    fn multiplication_composes_right_to_left() {
        let s1 = Permutation::simple(1);
        let s2 = Permutation::simple(2);
        assert_eq!(&s1 * &s2, p("2,3,1"));
        let u = p("3,1,2");
        assert!((&u * &u.inverse()).is_identity());
        assert_eq!(u.inverse(), p("2,3,1"));
    }

    #[test]
    fn length_code_descents() {
        let w0 = p("3,2,1");
        assert_eq!(w0.length(), 3);
        assert_eq!(w0.lehmer_code(), vec![2, 1, 0]);
        assert!(Permutation::identity().lehmer_code().is_empty());
        assert_eq!(Permutation::identity().length(), 0);
        assert_eq!(p("2,3,1").descents(), BTreeSet::from([2]));
        assert!(matches!(
            Permutation::from_lehmer_code(&[3, 0, 0]),
            Err(Error::InvalidCode(_))
        ));
    }

    #[test]
    fn reduced_words() {
        let words = p("3,2,1").all_reduced_words(10).unwrap();
        assert_eq!(
            words,
            BTreeSet::from([ReducedWord(vec![1, 2, 1]), ReducedWord(vec![2, 1, 2])])
        );
        assert_eq!(
            Permutation::identity().all_reduced_words(1).unwrap(),
            BTreeSet::from([ReducedWord(vec![])])
        );
        assert_eq!(p("2,3,1").canonical_reduced_word(), ReducedWord(vec![1, 2]));
        assert!(matches!(
            Permutation::longest_element(4).all_reduced_words(5),
            Err(Error::TooManyWords { limit: 5 })
        ));
    }

    #[test]
    fn bruhat_examples() {
        assert!(Permutation::simple(1).bruhat_leq(&p("3,2,1")));
        assert!(!p("2,1,3").bruhat_leq(&p("1,3,2")));
        assert!(Permutation::identity().bruhat_leq(&p("1,3,2")));
        assert!(!p("3,2,1").bruhat_leq(&Permutation::identity()));
    }

    #[test]
    fn inversion_sets() {
        let all: BTreeSet<_> = [(1, 2), (1, 3), (2, 3)]
            .into_iter()
            .map(|(i, j)| RootPair::new(i, j))
            .collect();
        assert_eq!(p("3,2,1").inversion_pairs(), all);
        assert!(Permutation::identity().inversion_pairs().is_empty());
        let tau: BTreeSet<_> = [(1, 3), (1, 4), (2, 3), (2, 4)]
            .into_iter()
            .map(|(i, j)| RootPair::new(i, j))
            .collect();
        assert_eq!(Permutation::tau(2).inversion_pairs(), tau);
        assert_eq!(
            p("2,3,1").noninversion_pairs(3),
            BTreeSet::from([RootPair::new(2, 3)])
        );
    }

    #[test]
    fn special_elements() {
        assert_eq!(Permutation::longest_element(3), p("3,2,1"));
        assert_eq!(Permutation::tau(1), p("2,1"));
        assert_eq!(Permutation::tau(2), p("3,4,1,2"));
        assert_eq!(Permutation::tau(2).length(), 4);
    }

    #[test]
    fn parsing_and_display() {
        assert_eq!(p("s1 s2"), p("2,3,1"));
        assert_eq!(p("id"), Permutation::identity());
        assert_eq!(p("2,1,3").to_string(), "2,1");
        assert_eq!(Permutation::identity().to_string(), "1");
        assert!("2,2".parse::<Permutation>().is_err());
        assert!("s0".parse::<Permutation>().is_err());
        assert_eq!("1,2".parse::<ReducedWord>().unwrap(), ReducedWord(vec![1, 2]));
    }

    #[test]
    fn ordering_is_lexicographic_on_padded_one_line() {
        let mut perms = Permutation::all(3);
        perms.reverse();
        perms.sort();
        assert_eq!(perms, Permutation::all(3));
        assert!(Permutation::identity() < p("1,3,2"));
    }
}
