//! Triple Schubert calculus: double Schubert and Grothendieck polynomials,
//! the structure constants of products of double Schubert classes taken in
//! two different equivariant variable sets, and exact positivity certificates
//! for them.

pub mod divided;
pub mod error;
pub mod grothendieck;
pub mod permutation;
pub mod poly;
pub mod positivity;
pub mod schubert;
pub mod selftest;

pub use error::{Error, Result};
pub use permutation::{Permutation, ReducedWord, RootPair};
pub use poly::{LocalizedElement, Monomial, Polynomial, Var};

/// Identifies the sign and composition conventions behind every computed
/// object. Stored artifacts carry it and are invalid under a different value.
pub const CONVENTION_VERSION: &str = "conv-1: (uv)(i)=u(v(i)); alpha_i=t_{i+1}-t_i; a(-)b=(a-b)/(1+beta*b)";
