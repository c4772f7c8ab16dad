use thiserror::Error;

/// Errors raised by the library.
///
/// The variants fall into three groups that the CLI maps to exit codes:
/// invalid parameters and malformed input, insufficient samples or other
/// precondition failures, and desk-scale resource bounds.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient sample: {0}")]
    InsufficientSample(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),

    #[error("singular design: {0}")]
    SingularDesign(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for errors caused by too little data or an unmet operation
    /// precondition (as opposed to malformed parameters).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::InsufficientSample(_) | Error::Precondition(_) | Error::SingularDesign(_)
        )
    }

    pub fn is_resource_bound(&self) -> bool {
        matches!(self, Error::ResourceBound(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
