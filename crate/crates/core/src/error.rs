use thiserror::Error;

/// Failures reported by the algebraic and numeric engines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("term exceeds the weight: |alpha:l| = {weight} > 1")]
    TermAboveWeight { weight: String },
    #[error("variable index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("coordinate restriction needs a non-empty keep set")]
    EmptyKeepSet,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,
    #[error("resultant of two zero polynomials is undefined")]
    BothZero,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("binary form is zero")]
    ZeroForm,
    #[error("weight vector violation: {0}")]
    WeightViolation(String),
    #[error("no l-quasielliptic system exists for these weights")]
    NoSuchSystem,
    #[error("anisotropic weights are not supported by this operation")]
    AnisotropicNotSupported,
    #[error("point must be non-zero")]
    ZeroPoint,
    #[error("system is not quasielliptic")]
    NotQuasiElliptic,
    #[error("system is not elliptic")]
    NotElliptic,
    #[error("principal part has a multiple real zero")]
    MultipleRealZero,
    #[error("operator is not weakly coercive")]
    NotWeaklyCoercive,
    #[error("operator is not weakly coercive; L0 membership is undefined")]
    PNotWeaklyCoercive,
    #[error("system does not have the S-system shape")]
    NotAnSSystem,
    #[error("delta must lie strictly between 0 and 1")]
    InvalidDelta,
    #[error("symbol denominator vanishes identically")]
    DenominatorVanishes,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("derivative order {order} exceeds the bump table (max {max})")]
    OrderExceedsTable { order: u32, max: u32 },
    #[error("direction is not a common zero of the principal parts (residual {residual:e})")]
    DirectionNotAZero { residual: f64 },
    #[error("multi-index order {order} must be at most {max}")]
    AlphaTooHigh { order: u32, max: u32 },
    #[error("empty operator system")]
    EmptySystem,
}

pub type Result<T> = std::result::Result<T, Error>;
