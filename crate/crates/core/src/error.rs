use thiserror::Error;

/// Errors raised by the exact-arithmetic and geometry routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("modulus {0} is not a prime in 2..=65536")]
    BadModulus(u64),
    #[error("(0:0) is not a point of the projective line")]
    ZeroPoint,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("cannot parse {0:?}")]
    Parse(String),
    #[error("repeated point in {0}")]
    RepeatedPoint(&'static str),
    #[error("cross-ratio is undefined: numerator and denominator both vanish")]
    DegenerateCrossRatio,
    #[error("need at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("point is not in X")]
    NotInVariety,
    #[error("bad reduction modulo {modulus}: {reason}")]
    BadReduction { modulus: u32, reason: String },
    #[error("enumeration of {size} points exceeds the limit {limit}")]
    EnumerationTooLarge { size: u128, limit: u128 },
    #[error("denominator vanishes at slot x{slot}")]
    VanishingDenominator { slot: usize },
    #[error("binary form has {0} distinct linear factors; at least 3 are required")]
    TooFewFactors(usize),
    #[error("invalid linear factor: {0}")]
    InvalidFactor(String),
    #[error("rank-deficient input (rank {rank} < {expected})")]
    RankDeficient { rank: usize, expected: usize },
    #[error("inconsistent linear system")]
    Inconsistent,
    #[error("one-parameter weight must be nonzero")]
    ZeroWeight,
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
