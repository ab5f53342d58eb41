use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Error)]
pub enum Error {
    /// The generated constraint monoid exceeded the configured element cap.
    #[error("constraint monoid exceeded the element budget of {cap} elements")]
    Explosion { cap: usize },

    /// A morphism was evaluated on the empty word.
    #[error("the constraint morphism is only defined on non-empty words")]
    EmptyWord,

    /// Preimage was requested for an element outside the morphism image.
    #[error("element {0} is not in the image of the constraint morphism")]
    NotInImage(usize),

    /// A band complex does not have the shape required by the periodicity bound.
    #[error("band complex violates the bound shape: {0}")]
    Shape(String),

    /// A move's precondition failed.
    #[error("move precondition failed: {0}")]
    Precondition(String),

    /// Virtually-free input data failed validation.
    #[error("invalid virtually free structure: {0}")]
    InvalidVfData(String),

    /// Problem file could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Problem file parsed but failed validation.
    #[error("validation error: {0}")]
    Validation(String),

    /// Certificate file is malformed.
    #[error("certificate format error: {0}")]
    CertFormat(String),
}

impl Error {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
