use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("transmitter is on floor {tx} but receiver is on floor {rx}; wall counting needs both on one floor")]
    FloorMismatch { tx: i32, rx: i32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("missing parameter: {0}")]
    MissingParameter(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid floor plan: {0}")]
    InvalidPlan(String),

    #[error("row {row}, column `{column}`: {reason}")]
    Parse {
        row: u64,
        column: String,
        reason: String,
    },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate design: {0}")]
    DegenerateDesign(String),

    #[error("length mismatch: {left} predicted values vs {right} observed values")]
    LengthMismatch { left: usize, right: usize },

    #[error("no receiver position at least 1 m from the AP found in {attempts} attempts")]
    GeometryExhausted { attempts: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }
}
