use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed (non-convergence, vanishing probability).
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("op {index} ({op}): {source}")]
    Execution {
        index: usize,
        op: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{context}: {source}")]
    Experiment {
        context: String,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
