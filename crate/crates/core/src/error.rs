use thiserror::Error;

use crate::classify::{FailureWitness, SpectralReport};
use crate::inclusion::NormalizerFailure;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("inclusion matrix must have at least one row and one column")]
    EmptyMatrix,

    #[error("row {row} has {got} entries, expected {expected}")]
    RaggedMatrix { row: usize, expected: usize, got: usize },

    #[error("row {0} is identically zero (non-unital or redundant data)")]
    ZeroRow(usize),

    #[error("column {0} is identically zero (non-unital or redundant data)")]
    ZeroColumn(usize),

    #[error("dimension {index} must be positive")]
    NonPositiveDim { index: usize },

    #[error("dimension vector has length {got}, expected {expected}")]
    DimLengthMismatch { expected: usize, got: usize },

    #[error("not a normalizer matrix: {0}")]
    NotNormalizerMatrix(NormalizerFailure),

    #[error("inclusion is not regular: {0}")]
    NotRegular(FailureWitness),

    #[error("spectral condition fails: A^t n' = {:?}{}", .0.at_n, per_block_note(.0))]
    SpectralConditionFails(Box<SpectralReport>),

    #[error("matrix of size {rows}x{cols} exceeds the search bound {limit}x{limit}")]
    SizeLimit { rows: usize, cols: usize, limit: usize },

    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("shape mismatch: expected summands {expected:?}, got {got:?}")]
    ShapeMismatch { expected: Vec<usize>, got: Vec<usize> },

    #[error("family sizes differ: {left} vs {right}")]
    CountMismatch { left: usize, right: usize },

    #[error("member {member} is not unitary (residual {residual:e})")]
    NotUnitary { member: usize, residual: f64 },

    #[error("member {member} is not in the normalizer (residual {residual:e})")]
    NotInNormalizer { member: usize, residual: f64 },

    #[error("family is not a certified orthonormal basis (gram residual {residual:e})")]
    UnverifiedFamily { residual: f64 },

    #[error("solver did not reach tolerance {tolerance:e} after {restarts} restarts (best residual {best_residual:e})")]
    SolverExhausted { tolerance: f64, restarts: usize, best_residual: f64 },

    #[error("ambiguous block pattern in summand {summand} at column block {column}")]
    AmbiguousBlockPattern { summand: usize, column: usize },

    #[error("block structure extraction needs commutative B and constant rows: {0}")]
    UnsupportedInclusion(String),

    #[error("depth exceeds n_max = {n_max}")]
    DepthExceeds { n_max: usize },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid field {path}: {message}")]
    Validation { path: String, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

fn per_block_note(r: &SpectralReport) -> String {
    r.per_block_d.as_ref().map(|d| format!(", per-block d = {d:?}")).unwrap_or_default()
}
