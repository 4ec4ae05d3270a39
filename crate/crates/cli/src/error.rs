use std::path::Path;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] coamen::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(
        "spectral-radius iteration did not converge; the report was written with converged = false"
    )]
    NonConvergence,
}

pub type CliResult<T> = std::result::Result<T, CliError>;

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Self::Core(e) => e.kind(),
            Self::Io { .. } => "io",
            Self::Config(_) => "config",
            Self::Usage(_) => "usage",
            Self::NonConvergence => "non-convergence",
        }
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 2,
            Self::NonConvergence => 3,
            _ => 1,
        }
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            message: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            axiom: Option<&'a str>,
        }
        #[derive(Serialize)]
        struct Doc<'a> {
            schema: u32,
            error: Body<'a>,
        }
        let axiom = match self {
            Self::Core(coamen::Error::Validation { axiom, .. }) => Some(*axiom),
            _ => None,
        };
        serde_json::to_string(&Doc {
            schema: crate::SCHEMA,
            error: Body {
                kind: self.kind(),
                message: self.to_string(),
                axiom,
            },
        })
        .expect("error document serializes")
    }
}
