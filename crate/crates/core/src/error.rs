use thiserror::Error;

/// Errors raised by the solvers, the configuration layer and the exporters.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error in `{key}`: {constraint}")]
    Config { key: String, constraint: String },

    #[error("instability at node (i={i}, j={j}) x={x:.5} theta={theta:.5}: value {value}")]
    Instability {
        i: usize,
        j: usize,
        x: f64,
        theta: f64,
        value: f64,
    },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no crossing of level {level} on row {row} inside the domain")]
    OutOfDomain { level: f64, row: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn config(key: impl Into<String>, constraint: impl Into<String>) -> Self {
        Error::Config {
            key: key.into(),
            constraint: constraint.into(),
        }
    }

    /// Process exit status used by the command line front end.
    ///
    /// 2 for configuration problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::Domain(_) | Error::Unsupported(_) => 2,
            Error::Instability { .. }
            | Error::Numerical(_)
            | Error::OutOfDomain { .. }
            | Error::Io(_)
            | Error::Json(_) => 3,
        }
    }
}
