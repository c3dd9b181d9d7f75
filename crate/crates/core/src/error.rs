use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("genus mismatch: expected {expected}, found {found}")]
    GenusMismatch { expected: usize, found: usize },

    #[error("coordinate vector has length {len}, expected an even length 2g with g >= 1")]
    BadCoordinateLength { len: usize },

    #[error("zero homology class for `{0}`: the curve would be separating")]
    ZeroClass(String),

    #[error("genus {genus} exceeds the brute-force limit {limit}")]
    TooLarge { genus: usize, limit: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("index {index} out of range (valid: 1..{len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("twist `{0}` has no integer homology class")]
    MissingIntegerClass(String),

    #[error("integer class of `{label}` does not reduce to its mod-2 class")]
    InconsistentClasses { label: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn parse(input: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.into(),
            reason: reason.into(),
        }
    }
}
