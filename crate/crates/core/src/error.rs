use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at v = {0}")]
    Pole(String),
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("word is not in canonical order: {0}")]
    NonCanonicalWord(String),
    #[error("rewrite step bound {0} exceeded")]
    StepBound(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("missing action table entry: {0}")]
    MissingAction(String),
    #[error("element is not a weight vector")]
    NotWeightHomogeneous,
    #[error("element lies outside the supported span: {0}")]
    UnsupportedSpan(String),
    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(u32, u32),
    #[error("requested bidegree ({0},{1}) exceeds cutoff {2}")]
    BeyondCutoff(u32, u32, u32),
    #[error("kernel has no invertible leading term")]
    NonUnitLeadingTerm,
    #[error("unbalanced t-powers: ({0},{1})")]
    UnbalancedPowers(i32, i32),
    #[error("not divisible by the quantum determinant")]
    NotDivisible,
}

pub type Result<T> = std::result::Result<T, Error>;
