use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("leading coefficient is zero")]
    ZeroLeadingCoefficient,
    #[error("residual factor is reducible over the current tower level")]
    ReduciblePsi,
    #[error("residual factor y is not allowed above level 0")]
    PsiIsY,
    #[error("polynomial chain degrees are incompatible")]
    ChainDegreeMismatch,
    #[error("working precision is insufficient")]
    InsufficientPrecision,
    #[error("precision cap {0} exceeded")]
    PrecisionLimit(u32),
    #[error("type is not complete")]
    IncompleteType,
    #[error("approximation is an exact factor")]
    ExactFactor,
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
