use thiserror::Error;

/// Errors raised anywhere in the core library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not a permutation: {0}")]
    NotAPermutation(String),
    #[error("invalid Lehmer code: {0}")]
    InvalidCode(String),
    #[error("more than {limit} reduced words")]
    TooManyWords { limit: usize },
    #[error("word {word:?} is not a reduced word for {target}")]
    NotReduced { word: Vec<usize>, target: String },
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not exactly divisible")]
    NotDivisible,
    #[error("permutation {perm} does not lie in S_{n}")]
    AmbientTooSmall { perm: String, n: usize },
    #[error("expansion residual is nonzero at ambient size {ambient}")]
    ResidualNonzero { ambient: usize },
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("denominator outside the allowed (1+b*y_j) / (1+b*t_i) shape")]
    DenominatorShapeViolation,
    #[error("polynomial is not homogeneous: {0}")]
    NotHomogeneous(String),
    #[error("search space of {size} monomials exceeds the cap {cap}")]
    SearchSpaceTooLarge { size: u128, cap: u128 },
    #[error("solver node budget of {budget} exhausted")]
    BudgetExceeded { budget: usize, log: Vec<String> },
}

pub type Result<T> = std::result::Result<T, Error>;
