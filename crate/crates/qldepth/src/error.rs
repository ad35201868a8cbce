use thiserror::Error;

/// Errors produced by simulation, parsing, analysis, and solving.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the supported configuration range.
    #[error("configuration error: {0}")]
    Config(String),

    /// A caller violated an operation's contract (bad index, bad argument).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The input document is not well-formed.
    #[error("parse error: {0}")]
    Parse(String),

    /// The document is well-formed but violates a structural invariant.
    #[error("validation error: invariant `{invariant}`: {detail}")]
    Validation { invariant: String, detail: String },

    /// No steering angle can reach the target halting probability.
    #[error(
        "steering infeasible: target halting probability {target} is outside \
         the achievable range [{min}, {max}]"
    )]
    Infeasible { target: f64, min: f64, max: f64 },

    /// An eigenvalue computation produced results outside numerical tolerance.
    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn validation(invariant: &str, detail: impl Into<String>) -> Self {
        Error::Validation {
            invariant: invariant.to_string(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
