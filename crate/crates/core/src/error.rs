use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite entry at index {index}")]
    NonFiniteEntry { index: usize },

    #[error("vector must have unit norm, got {norm}")]
    NotUnitNorm { norm: f64 },

    #[error("matrix is not Hermitian (max asymmetry {asymmetry})")]
    NotHermitian { asymmetry: f64 },

    #[error("matrix is not positive definite (pivot {pivot} = {value})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("integrated sidelobe level is zero; PSLR is unbounded")]
    ZeroIsl,

    #[error("sequence has zero energy")]
    ZeroSequence,

    #[error("mismatch filter has zero norm")]
    ZeroFilter,

    #[error("|y^H h|^2 vanished; the ratio objective is undefined")]
    ZeroDenominator,

    #[error("invalid spectral mask: {0}")]
    InvalidMask(String),

    #[error("invalid symbols: {0}")]
    InvalidSymbols(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("non-finite value produced by the {stage} update at ADMM iteration {iteration}")]
    NonFinite {
        stage: &'static str,
        iteration: usize,
    },

    #[error("filter update failed after diagonal loading: {0}")]
    FilterUpdate(Box<Error>),

    #[error("outer iteration {iteration}: {source}")]
    Outer {
        iteration: usize,
        #[source]
        source: Box<Error>,
    },
}
