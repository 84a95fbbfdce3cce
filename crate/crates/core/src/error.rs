use alloc::string::String;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Coordinates outside the model domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// An argument violates an operation's precondition.
    #[error("argument error: {0}")]
    Argument(String),
    /// A computed quantity is inconsistent beyond its numerical slack.
    #[error("numerical consistency error: {0}")]
    Numerical(String),
    /// A map or metric was used before passing validation.
    #[error("refused: {0} has not been validated")]
    Unvalidated(String),
    /// The objective is not proper, so no minimizer exists.
    #[error("precondition error: {0}")]
    Precondition(String),
}

pub type Result<T> = core::result::Result<T, Error>;
