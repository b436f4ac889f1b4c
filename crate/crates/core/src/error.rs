//! Error types shared across the library.

use thiserror::Error;

/// Errors from lattice and mode-function operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModeError {
    #[error("deformation parameter must satisfy 0 < q < 1, got {0}")]
    InvalidQ(f64),
    #[error("operands live on different lattices (q = {0} vs q = {1})")]
    LatticeMismatch(f64, f64),
    #[error("empty radial window [{0}, {1}]")]
    EmptyWindow(i32, i32),
    #[error("angular sample count {n_theta} violates the band limit for |l| up to {max_abs_l} (need n_theta > 2|l|)")]
    BandLimit { n_theta: usize, max_abs_l: i32 },
    #[error("sample count must be positive and even, got {0}")]
    BadSampleCount(usize),
    #[error("non-finite coefficient at (k={0}, l={1})")]
    NonFinite(i32, i32),
}

/// Errors from reading or writing mode-function files.
#[derive(Debug, Error)]
pub enum FileError {
    #[error("json parse error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("csv parse error at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("invalid mode data: {0}")]
    Invalid(#[from] ModeError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

/// Errors from the quantum exponential evaluator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QexpError {
    #[error("truncation tolerance must lie in (0, 1e-6], got {0}")]
    InvalidTol(f64),
    #[error("pole of the extended product: 1 + q^{{2{0}}} u vanishes")]
    Pole(usize),
    #[error("n_theta must be a power of two >= {min}, got {got}")]
    BadNTheta { got: usize, min: usize },
    #[error("empty l window [{0}, {1}]")]
    EmptyLWindow(i32, i32),
}

/// Errors from kernel construction and transform application.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FourierError {
    #[error("kernel entry a({n}, {l}) is outside the built table")]
    MissingKernel { n: i32, l: i32 },
    #[error("empty kernel window")]
    EmptyKernelWindow,
    #[error("output window [{0}, {1}] is empty; kernel window too small for the input support")]
    WindowTooSmall(i32, i32),
    #[error(transparent)]
    Qexp(#[from] QexpError),
    #[error(transparent)]
    Mode(#[from] ModeError),
}
