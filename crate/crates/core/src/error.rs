use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Arguments outside an operation's domain (bad `n`/`k`, mismatched shapes).
    #[error("domain error: {0}")]
    Domain(String),

    /// A binary sequence that does not start with a 1.
    #[error("invalid increment sequence: {0}")]
    InvalidSequence(String),

    /// A law table missing one or more compositions of its `n`.
    #[error("incomplete law: {0}")]
    IncompleteLaw(String),

    /// A theorem-verification precondition that does not hold.
    #[error("not applicable: hypothesis failed: {0}")]
    NotApplicable(String),

    /// A malformed law file.
    #[error("law file error: {0}")]
    LawFile(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
