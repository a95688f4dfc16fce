use thiserror::Error;

/// Errors raised by the quaternionic geometry routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("structural error: {0}")]
    Structural(String),

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(String),

    #[error("unsupported dimension k = {k}: {hint}")]
    UnsupportedDimension { k: usize, hint: String },

    #[error("classification failed, residual {residual:e} after fallback")]
    ClassificationFailure { residual: f64 },

    #[error("inadmissible lambda tuple: {0}")]
    InadmissibleTuple(String),

    #[error("gamma pole at argument {0}")]
    Pole(f64),

    #[error("weight {0:?} does not occur in the valuation space")]
    InadmissibleWeight(Vec<i64>),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zonotope has {0} generators, at most {max} supported", max = crate::valuation::MAX_GENERATORS)]
    TooManyGenerators(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
