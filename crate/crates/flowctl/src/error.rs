use serde::Serialize;
use thiserror::Error;

use crate::report::Num;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Library(#[from] bellflow::Error),

    #[error("verification failed: {}", .0.join(", "))]
    Verification(Vec<String>),

    #[error("output: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv output: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Library(e) => match e {
                bellflow::Error::DegenerateSpectrum { .. } => 2,
                bellflow::Error::SingularMap { .. }
                | bellflow::Error::NonFinite { .. }
                | bellflow::Error::EmptySeries => 1,
                _ => 3,
            },
            CliError::Verification(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Library(bellflow::Error::DegenerateSpectrum { .. }) => "degenerate_spectrum",
            CliError::Library(bellflow::Error::SingularMap { .. }) => "singular_map",
            CliError::Library(bellflow::Error::IllConditioned { .. }) => "ill_conditioned",
            CliError::Library(_) => "numerical",
            CliError::Verification(_) => "verification",
            CliError::Io(_) | CliError::Csv(_) => "output",
        }
    }

    pub fn report(&self) -> ErrorReport {
        let (first, second, gap, tolerance) = match self {
            CliError::Library(bellflow::Error::DegenerateSpectrum { first, second, gap, tolerance }) => {
                (Some(*first), Some(*second), Some(Num(*gap)), Some(Num(*tolerance)))
            }
            CliError::Library(bellflow::Error::IllConditioned { deviation, tolerance, .. }) => {
                (None, None, Some(Num(*deviation)), Some(Num(*tolerance)))
            }
            _ => (None, None, None, None),
        };
        ErrorReport {
            error: ErrorBody { kind: self.kind(), message: self.to_string(), first, second, gap, tolerance },
        }
    }
}

#[derive(Serialize)]
pub struct ErrorReport {
    error: ErrorBody,
}

#[derive(Serialize)]
struct ErrorBody {
    kind: &'static str,
    message: String,
    /// Indices of the colliding eigenvalues `a^first`, `a^second`.
    first: Option<usize>,
    second: Option<usize>,
    gap: Option<Num>,
    tolerance: Option<Num>,
}
