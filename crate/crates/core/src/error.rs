use thiserror::Error;

/// Errors raised by the library. Mathematical violations (a configuration
/// contradicting a proven bound) are kept apart from input problems so the
/// CLI can map them to distinct exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("count mismatch at {location}: expected {expected}, found {found}")]
    Count {
        location: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invariant violated: {0}")]
    Violation(String),
}

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }

    /// True for errors that signal a broken mathematical invariant rather
    /// than bad input.
    pub fn is_violation(&self) -> bool {
        matches!(self, Error::Violation(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
