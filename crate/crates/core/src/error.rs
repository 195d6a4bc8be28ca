use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("incompatible operands: dimension {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix must be square with positive dimension (got {0} entries)")]
    NotSquare(usize),

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    Convergence { iterations: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error(
        "matrix is singular or too ill-conditioned to invert (condition estimate {condition:e})"
    )]
    Singular { condition: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("normalizer vanishes: beta_{index} = 0")]
    DegenerateNormalizer { index: usize },

    #[error("degenerate spectrum: minimal eigenvalue gap {gap:e} below threshold {threshold:e}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },

    #[error("closed form only available for chain length 4 (got {0})")]
    UnsupportedLength(usize),

    #[error("config line {line}: `{field}`: {message}")]
    Config {
        line: usize,
        field: String,
        message: String,
    },

    #[error("matrix file line {line}: {message}")]
    MatrixFormat { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Shorthand for [`Error::InvalidParameter`].
    pub fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
