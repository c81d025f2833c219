use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: usize, right: usize },

    #[error("invalid modulus {0}: {1}")]
    InvalidModulus(usize, &'static str),

    #[error("window is identically zero")]
    ZeroWindow,

    #[error("quasi-norm {norm} is not below 1; Neumann series does not contract")]
    ContractionViolation { norm: f64 },

    #[error("Fourier series vanishes on the grid (min |F a| = {min:e})")]
    VanishingFourierSeries { min: f64 },

    #[error("determinant {det} is not 1 mod {modulus}")]
    NotSymplectic { det: i64, modulus: usize },

    #[error("invalid generator: {0}")]
    InvalidGenerator(String),

    #[error("operator is not unitary (||U*U - I|| = {defect:e})")]
    NotUnitary { defect: f64 },

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),

    #[error("operator is not invertible (condition number {condition:e})")]
    NotInvertible { condition: f64 },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
