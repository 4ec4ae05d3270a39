use thiserror::Error;

/// Errors raised by operator builders, ring loading and the spectral routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    /// A structural axiom failed during validation. `axiom` is a stable name
    /// such as "dimension homomorphism" or "conjugation involution".
    #[error("validation error: {axiom} failed ({detail})")]
    Validation { axiom: &'static str, detail: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("build failed at truncation size {size}: {source}")]
    Build {
        size: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Validation { .. } => "validation",
            Error::Parse(_) => "parse",
            Error::Build { .. } => "build",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
