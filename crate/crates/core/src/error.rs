use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One violated scenario constraint.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Violation {
    pub constraint: &'static str,
    pub field: String,
    pub value: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {} = {}", self.constraint, self.field, self.value)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("degenerate channel statistics: {0}")]
    Degenerate(String),

    #[error("integrand is not finite at node {index} (z = {node})")]
    NonFiniteIntegrand { index: usize, node: f64 },

    #[error("non-finite value in Monte Carlo trial {trial}: {what}")]
    NonFiniteSample { trial: u64, what: &'static str },

    #[error("scenario validation failed:\n{}", display_violations(.0))]
    Validation(Vec<Violation>),

    #[error("failed to parse {origin}: {source}")]
    Parse {
        origin: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Validation and configuration problems are the caller's fault; everything
    /// else is a runtime or numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Validation(_) | Error::Config(_) | Error::Parse { .. })
    }
}

fn display_violations(v: &[Violation]) -> String {
    v.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n")
}
