use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Malformed input: wrong dimensions, out-of-range parameters.
    #[error("{field}: {reason}")]
    Input { field: String, reason: String },

    /// A well-formed object that violates a structural invariant.
    #[error("validation failed: {0}")]
    Validation(String),

    /// A non-finite value appeared while evaluating at arc length `s`.
    #[error("non-finite {what} at s = {s}")]
    NonFinite { what: String, s: f64 },
}

impl Error {
    pub(crate) fn input(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Input {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
