use thiserror::Error;

/// Errors raised by validation and numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("entry count {found} does not match shape {rows}x{cols}")]
    Shape {
        rows: usize,
        cols: usize,
        found: usize,
    },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("not Hermitian: max |A - A^dagger| = {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("not PSD: eigenvalue {eigenvalue:e} below tolerance")]
    NotPsd { eigenvalue: f64 },

    #[error("geometric mean requires strictly PD left argument (min eigenvalue {eigenvalue:e})")]
    NotPositiveDefinite { eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    Trace { trace: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("rank zero: every column is numerically zero")]
    RankZero,

    #[error("vector norm is {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("not unitary: max |U^dagger U - I| = {defect:e}")]
    NotUnitary { defect: f64 },

    #[error("not trace preserving: max |sum V^dagger V - I| = {defect:e}")]
    NotTracePreserving { defect: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("brute force limit: length {len} exceeds {limit}")]
    BruteForceLimit { len: usize, limit: usize },

    #[error("no boundary in dimension 1")]
    NoBoundary,

    #[error("{name} = {value} out of range {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("malformed JSON: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
