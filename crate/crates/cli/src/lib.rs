//! Command implementations behind the `hermsym` binary. Each command returns
//! a [`RunReport`]; the binary only parses flags and prints.

pub mod commands;
pub mod report;

pub use commands::{analyze_potential, demo_2x2, random_suite, verify_matrix, PotentialProblem, RunOptions};
pub use report::{ResidualEntry, RunReport, StateRow, Verdict};

use thiserror::Error;

/// Exit code for malformed input or usage errors.
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed input: {0}")]
    Format(String),
    #[error("b = c = 0 leaves θ undefined; the 2x2 illustration needs (b, c) ≠ (0, 0)")]
    DegenerateInput,
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hermsym::Error),
}

impl CliError {
    /// 2 for anything wrong with the input, 1 when a computation on valid
    /// input could not be verified.
    pub fn exit_code(&self) -> i32 {
        use hermsym::Error as E;
        match self {
            CliError::Core(E::ConvergenceFailure(_) | E::CompositionMismatch { .. } | E::NormAnomalous { .. }) => 1,
            _ => EXIT_INPUT_ERROR,
        }
    }
}
