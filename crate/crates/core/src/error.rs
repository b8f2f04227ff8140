use thiserror::Error;

use crate::schrodinger::expr::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix must have at least one row")]
    Empty,
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: max |M - M†| = {residual:e} exceeds {tolerance:e}")]
    NotHermitian { residual: f64, tolerance: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("eigensolver did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("eigenvector {index} has norm below tolerance")]
    ZeroVector { index: usize },
    #[error("invalid spectral decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("PT and TP disagree: max |P U - U P*| = {residual:e} exceeds {tolerance:e}")]
    CompositionMismatch { residual: f64, tolerance: f64 },
    #[error("chi-norm of state {index} is {value:e} in magnitude, expected 1")]
    NormAnomalous { index: usize, value: f64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("potential is not finite at x = {x} (value {value})")]
    Evaluation { x: f64, value: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("grid [{xmin}, {xmax}] is not symmetric about the origin")]
    AsymmetricGrid { xmin: f64, xmax: f64 },
    #[error("mass must be positive and finite, got {0}")]
    InvalidMass(f64),
    #[error("no sample exceeds the amplitude floor")]
    AllBelowFloor,
    #[error("requested {requested} states but only {available} are available")]
    TooManyStates { requested: usize, available: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
