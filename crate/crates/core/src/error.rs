use std::fmt;

/// Errors surfaced by configuration validation and the exact engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The frequency list was empty.
    EmptyConfiguration,
    /// A frequency of zero was supplied; frequencies must be >= 1.
    ZeroFrequency,
    /// The frequency list is not strictly increasing at the given index.
    NotStrictlyIncreasing { position: usize },
    /// Checked integer arithmetic overflowed. `context` names the computation
    /// that could not be carried out exactly.
    Overflow { context: &'static str },
    /// The running least common multiple left the 64-bit width the cell
    /// engine operates in. Carries the last partial lcm that still fit.
    LcmOverflow { partial: u64 },
    /// An internal consistency check failed. This is a bug in the engines,
    /// never a user error.
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyConfiguration => write!(f, "frequency list is empty"),
            Error::ZeroFrequency => write!(f, "frequencies must be positive"),
            Error::NotStrictlyIncreasing { position } => write!(
                f,
                "frequencies must be strictly increasing (violated at index {position})"
            ),
            Error::Overflow { context } => {
                write!(f, "integer overflow while computing {context}")
            }
            Error::LcmOverflow { partial } => write!(
                f,
                "lcm exceeds 64-bit width (partial lcm {partial}); use the sweep engine"
            ),
            Error::Internal(msg) => write!(f, "internal consistency error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
