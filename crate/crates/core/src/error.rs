use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("polynomial text is empty")]
    EmptyPolynomial,

    #[error("invalid coefficient token {0:?}")]
    InvalidCoefficient(String),

    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,

    #[error("polynomial must have degree at least 1")]
    ConstantPolynomial,

    #[error("polynomial is not monic (leading coefficient {0})")]
    NotMonic(i64),

    #[error("cannot reverse a polynomial with zero constant term")]
    ZeroConstantTerm,

    #[error("root finder did not converge after {0} iterations")]
    RootsDidNotConverge(u32),

    #[error("no root in (1, 2)")]
    NoRootInUnitToTwo,

    #[error("{0} roots in (1, 2); pick one with an explicit index")]
    AmbiguousBeta1(usize),

    #[error("root index {0} out of range")]
    RootIndexOutOfRange(usize),

    #[error("root {index} has modulus {modulus} which is not safely greater than 1")]
    ConjugateNotExpanding { index: usize, modulus: f64 },

    #[error("root {index} has modulus {modulus} outside the parameter space (1, 2]")]
    ConjugateOutsideParameterSpace { index: usize, modulus: f64 },

    #[error("root {0} duplicates beta1 or another selected conjugate")]
    DuplicateConjugate(usize),

    #[error("value {0} has modulus 0 or 1; no normalisation exists")]
    UnitOrZeroConjugate(f64),

    #[error("word length {n} exceeds the budget of {budget}")]
    OverBudget { n: usize, budget: usize },

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("word length {len} does not match {expected}")]
    LengthMismatch { len: usize, expected: usize },

    #[error("truncation depth {tail} must be at least the maximal word length {n_max}")]
    TruncationTooShallow { tail: usize, n_max: usize },

    #[error("box dimension {found} does not match {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("no boxes given")]
    EmptyBoxes,

    #[error("2^{n} word boxes in dimension {dim} exceed the memory budget")]
    TooManyBoxes { n: usize, dim: usize },

    #[error("parameter region leaves the parameter space: {0}")]
    OutsideParameterSpace(String),

    #[error("degenerate parameter region: {0}")]
    DegenerateRegion(String),

    #[error("seed region set is empty")]
    EmptySeeds,

    #[error("criterion not applicable: {0}")]
    NotApplicable(String),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
