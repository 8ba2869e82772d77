use std::path::PathBuf;

use thiserror::Error;

use crate::network::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Coincident sensors, or a configuration the lexicographic rule cannot resolve.
    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// A distance gradient was requested at a point where it does not exist.
    #[error("singular configuration: {0}")]
    Singular(String),

    #[error("sensor {sensor} lies {distance:.3e} away from the network")]
    OffNetwork { sensor: usize, distance: f64 },

    #[error("quadrature did not converge on [{a}, {b}] of segment {segment}")]
    Quadrature { segment: usize, a: f64, b: f64 },

    #[error("performance function has no derivative at its jump breakpoint {0}")]
    UndefinedDerivative(f64),

    #[error("derivative kernel assumption violated: {0}")]
    AssumptionViolated(String),

    #[error("invalid network: {}", format_violations(.0))]
    InvalidNetwork(Vec<Violation>),

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("failed to parse {path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
