use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input document could not be parsed.
    Schema,
    /// The input parsed but violates an operation's precondition.
    Precondition,
    /// A configured resource cap was hit.
    Resource,
    /// An internal invariant failed. Always a bug.
    Internal,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A chart transform would give `x{component+1}` a negative value.
    #[error("not a blowing up with respect to the valuation{}: component x{} becomes negative", .step.map(|s| format!(" at step {}", s + 1)).unwrap_or_default(), .component + 1)]
    NotWithRespect { step: Option<usize>, component: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("node cap of {cap} exceeded")]
    NodeCap { cap: usize },

    #[error("dominant term is ambiguous")]
    Ambiguous,

    #[error("no witness system exists: dominant term of polynomial {poly} involves x{} which has no fixed sign", .var + 1)]
    WitnessImpossible { poly: usize, var: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Parse(_) => ErrorClass::Schema,
            Error::NodeCap { .. } => ErrorClass::Resource,
            Error::Internal(_) => ErrorClass::Internal,
            _ => ErrorClass::Precondition,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
