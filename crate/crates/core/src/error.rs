use thiserror::Error;

/// Errors raised by the algebra, search, and lifting routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WaringError {
    #[error("{0} is not prime")]
    NonPrimeP(u64),
    #[error("{0} is not a prime power")]
    NonPrimePowerQ(u64),
    #[error("size {size} exceeds the configured cap {cap}")]
    SizeCapExceeded { size: u128, cap: u64 },
    #[error("{what} of size {size} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u64,
    },
    #[error("division by zero")]
    DivisionByZero,
    #[error("derivative is not a unit at the starting point")]
    DerivativeNotUnit,
    #[error("starting point is not a root to the required precision")]
    NotARoot,
    #[error("lifting hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("polynomial has no root modulo the radical at the starting point")]
    NoRootModJ,
    #[error("characteristic {p} divides k = {k}")]
    CharDividesK { p: u64, k: u64 },
    #[error("base witnesses do not represent the target modulo f")]
    BaseNotARepresentation,
    #[error("q = {q} is excluded by the table row (k = {k}, m = {m})")]
    ExcludedFieldSize { q: u64, k: u64, m: u32 },
    #[error("residue field {factor} of order {order} is not coverable by {k}-th powers")]
    ResidueFieldUncoverable { factor: String, order: u64, k: u64 },
    #[error("gcd(|R| = {order}, k = {k}) != 1")]
    GcdViolation { order: u128, k: u64 },
    #[error("ring is not commutative")]
    NonCommutative,
    #[error("mode violation: {0}")]
    ModeViolation(String),
    #[error("valuation of the zero polynomial is infinite")]
    ZeroPolynomial,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
}

impl WaringError {
    /// Stable variant name, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            WaringError::NonPrimeP(_) => "NonPrimeP",
            WaringError::NonPrimePowerQ(_) => "NonPrimePowerQ",
            WaringError::SizeCapExceeded { .. } => "SizeCapExceeded",
            WaringError::CapExceeded { .. } => "CapExceeded",
            WaringError::DivisionByZero => "DivisionByZero",
            WaringError::DerivativeNotUnit => "DerivativeNotUnit",
            WaringError::NotARoot => "NotARoot",
            WaringError::HypothesisViolated(_) => "HypothesisViolated",
            WaringError::NoRootModJ => "NoRootModJ",
            WaringError::CharDividesK { .. } => "CharDividesK",
            WaringError::BaseNotARepresentation => "BaseNotARepresentation",
            WaringError::ExcludedFieldSize { .. } => "ExcludedFieldSize",
            WaringError::ResidueFieldUncoverable { .. } => "ResidueFieldUncoverable",
            WaringError::GcdViolation { .. } => "GcdViolation",
            WaringError::NonCommutative => "NonCommutative",
            WaringError::ModeViolation(_) => "ModeViolation",
            WaringError::ZeroPolynomial => "ZeroPolynomial",
            WaringError::InvalidInput(_) => "InvalidInput",
            WaringError::VerificationFailed(_) => "VerificationFailed",
        }
    }
}

pub type Result<T> = std::result::Result<T, WaringError>;
