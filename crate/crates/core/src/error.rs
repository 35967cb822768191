use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("extension degree {0} is outside 1..=16")]
    InvalidDegree(u32),
    #[error("modulus {bits:#b} does not have degree {m}")]
    ModulusDegree { m: u32, bits: u32 },
    #[error("modulus {0:#b} is reducible over GF(2)")]
    ReducibleModulus(u32),
    #[error("element encoding {enc} is not below the field size {q}")]
    InvalidElement { enc: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("exponent exceeds the cap of {cap}")]
    ExponentOverflow { cap: u32 },
    #[error("operation needs a nonzero polynomial")]
    ZeroPolynomial,
    #[error("leading coefficient of divisor {index} is not invertible")]
    NonInvertibleLeadingCoefficient { index: usize },
    #[error("polynomial still has parametric coefficients")]
    ParametricCoefficients,
    #[error("at most {max} parameters are supported, {requested} requested")]
    TooManyParameters { requested: usize, max: usize },
    #[error("footprint is infinite: variable {var} has no pure power among the heads")]
    InfiniteFootprint { var: usize },
    #[error("monomial {0} is not in the footprint")]
    NotInFootprint(String),
    #[error("monomial {0} appears twice in the code basis")]
    DuplicateMonomial(String),
    #[error("generator matrix has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("code dimension {k} exceeds the exhaustive limit {limit}")]
    DimensionTooLarge { k: usize, limit: usize },
    #[error("code has no nonzero codeword")]
    EmptyCode,
    #[error("support monomial {0} is not below the leading monomial")]
    SupportNotBelowM(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("trace line {line}: {msg}")]
    InvalidStep { line: usize, msg: String },
    #[error("trace line {line}: claim {claimed} not justified: {reason}")]
    UnjustifiedClaim {
        line: usize,
        claimed: String,
        reason: String,
    },
    #[error("every leaf of the case tree is vacuous")]
    VacuousEverywhere,
    #[error("leaf constraints are unsatisfiable")]
    UnsatisfiableLeaf,
    #[error("leading coefficient of the divisor is not certified nonzero")]
    UncertifiedLeadingCoefficient,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
