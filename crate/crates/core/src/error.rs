use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("characteristic 2 is not supported (p must be an odd prime)")]
    CharacteristicTwo,
    #[error("field of order {p}^{m} is too large")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("invalid extension degree {0}")]
    InvalidDegree(u32),
    #[error("modulus is not monic irreducible of degree {0}")]
    ReducibleModulus(u32),
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("operands live over different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("series has no known nonzero coefficient")]
    PrecisionExhausted,
    #[error("exact non-monomial series must be truncated before inversion")]
    NeedsTruncation,
    #[error("coefficient at exponent {0} is not compatible with a p-th root")]
    NotPthPower(i64),
    #[error("Hensel lifting failed: {0}")]
    Hensel(&'static str),
    #[error("valuation of {what} must be positive, got {valuation:?}")]
    NonPositiveValuation {
        what: &'static str,
        valuation: Option<i64>,
    },
    #[error("insufficient precision: need {needed}, have {available:?}")]
    InsufficientPrecision { needed: i64, available: Option<i64> },
    #[error("prefix of length {len} is shorter than the required {needed}")]
    PrefixTooShort { len: usize, needed: usize },
    #[error("periodicity data is inconsistent with the prefix")]
    InconsistentPeriod,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unit condition t_1 not in m_v failed at place {0}")]
    UnitConditionFailed(String),
    #[error("target is outside the constructive scheme: {0}")]
    Unsupported(String),
    #[error("verification failed: {0}")]
    Verification(String),
}
