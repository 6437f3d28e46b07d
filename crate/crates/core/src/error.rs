use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("{what} = {value} is out of range (expected {expected})")]
    OutOfRange {
        what: &'static str,
        value: i128,
        expected: String,
    },

    #[error("subsets have different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),

    #[error("subsets live in different ground sets (n = {0} and n = {1})")]
    GroundMismatch(u32, u32),

    #[error("family is not uniform")]
    NonUniform,

    #[error("cannot parse subset {0:?}")]
    Parse(String),

    #[error("identity failed: {0}")]
    Identity(String),

    #[error("no injective assignment into the shade exists")]
    NoMatching,

    #[error("n = {n} is too large for exhaustive enumeration (limit {limit})")]
    TooLarge { n: u32, limit: u32 },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn out_of_range(what: &'static str, value: i128, expected: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            value,
            expected: expected.into(),
        }
    }
}
