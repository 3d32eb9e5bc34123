use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::poly::{LocalizedElement, Polynomial, Var};

/// Which differences a certificate is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `t_i - y_j`.
    Schubert,
    /// `t_i (-) y_j = (t_i - y_j) / (1 + b*y_j)`.
    Ktheory,
    /// `t_j - t_i` with `i < j`.
    Root,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DifferencePair {
    pub i: u32,
    pub j: u32,
    pub mode: Mode,
}

impl DifferencePair {
    pub fn new(i: u32, j: u32, mode: Mode) -> Self {
        assert!(i >= 1 && j >= 1, "indices start at 1");
        assert!(mode != Mode::Root || i < j, "root pair needs i < j, got ({i},{j})");
        Self { i, j, mode }
    }

    /// The polynomial part: `t_i - y_j`, or `t_j - t_i` for roots.
    pub fn numerator(&self) -> Polynomial {
        match self.mode {
            Mode::Schubert | Mode::Ktheory => Polynomial::var(Var::T(self.i)) - Polynomial::var(Var::Y(self.j)),
            Mode::Root => Polynomial::var(Var::T(self.j)) - Polynomial::var(Var::T(self.i)),
        }
    }

    pub fn to_localized(&self) -> LocalizedElement {
        match self.mode {
            Mode::Ktheory => LocalizedElement::new(self.numerator(), BTreeMap::from([(self.j, 1)]), BTreeMap::new()),
            _ => self.numerator().into(),
        }
    }
}

/// What was certified. Triples and Billey pairs carry their permutations in
/// one-line notation; the coefficient rendering is always present.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<String>,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateTerm {
    pub pairs: Vec<(u32, u32)>,
    pub beta: u32,
    pub lambda: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub mode: Mode,
    pub target: Target,
    pub terms: Vec<CertificateTerm>,
}

impl Certificate {
    pub fn empty(mode: Mode, coefficient: String) -> Self {
        Self { mode, target: Target { coefficient, ..Target::default() }, terms: Vec::new() }
    }

    pub fn for_triple(mut self, u: impl ToString, v: impl ToString, w: impl ToString) -> Self {
        self.target.u = Some(u.to_string());
        self.target.v = Some(v.to_string());
        self.target.w = Some(w.to_string());
        self
    }

    pub fn for_pair(mut self, u: impl ToString, w: impl ToString) -> Self {
        self.target.u = Some(u.to_string());
        self.target.w = Some(w.to_string());
        self
    }

    pub fn difference_pairs(&self, term: &CertificateTerm) -> Vec<DifferencePair> {
        term.pairs.iter().map(|&(i, j)| DifferencePair::new(i, j, self.mode)).collect()
    }

    /// `sum lambda * b^k * prod(differences)`.
    pub fn expand(&self) -> LocalizedElement {
        let beta: LocalizedElement = Polynomial::beta().into();
        let mut total = LocalizedElement::zero();
        for term in &self.terms {
            let mut product: LocalizedElement = Polynomial::constant(BigInt::from(term.lambda)).into();
            for _ in 0..term.beta {
                product = &product * &beta;
            }
            for pair in self.difference_pairs(term) {
                product = &product * &pair.to_localized();
            }
            total = &total + &product;
        }
        total
    }
}

/// Re-expands `cert` with plain ring arithmetic and compares with `target`.
pub fn verify_certificate(cert: &Certificate, target: &LocalizedElement) -> bool {
    let well_formed = cert.terms.iter().all(|t| {
        t.lambda >= 1
            && t.pairs.iter().all(|&(i, j)| i >= 1 && j >= 1 && (cert.mode != Mode::Root || i < j))
            && (cert.mode == Mode::Ktheory || t.beta == 0)
    });
    well_formed && cert.expand() == *target
}
