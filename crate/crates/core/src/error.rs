use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation image {0:?}: must be a bijection of 1..=n")]
    InvalidPermutation(Vec<usize>),

    #[error("permutations are not conjugate: cycle types {left:?} and {right:?} differ")]
    NotConjugate { left: Vec<usize>, right: Vec<usize> },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("the two permutations coincide; an algebra of two permutations needs pi != tau")]
    EqualPermutations,

    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("rank is {rank}, expected n - 2 = {expected}")]
    RankNotNMinus2 { rank: usize, expected: usize },

    #[error("expected exactly 2 free indices, got {0}")]
    FreeCountMismatch(usize),

    #[error("zero coefficient: {0}")]
    ZeroCoefficient(String),

    #[error("cycle supports of pi and tau differ")]
    SupportsDiffer,

    #[error("shape precondition violated: {0}")]
    Shape(String),

    #[error("gamma does not conjugate alpha to beta")]
    NotAConjugator,

    #[error("document error: {0}")]
    Document(String),
}

impl Error {
    /// Parse and document errors are input problems; everything else is an
    /// analysis precondition that failed on well-formed input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidPermutation(_) | Error::InvalidRational(_) | Error::Document(_)
        )
    }
}
