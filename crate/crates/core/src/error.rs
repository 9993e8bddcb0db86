use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    InvalidPrime(u64),

    #[error("valuation of zero is infinite")]
    ValuationOfZero,

    #[error("empty/degenerate ball: radius must be positive")]
    DegenerateBall,

    #[error("digit {digit} out of range for base {p}")]
    InvalidDigit { digit: u64, p: u64 },

    #[error("precision must be at least 1")]
    ZeroPrecision,

    #[error("p-adic values disagree on prime or precision: (p={p1}, K={k1}) vs (p={p2}, K={k2})")]
    PrecisionMismatch { p1: u64, k1: usize, p2: u64, k2: usize },

    #[error("insufficient precision K={precision}: level {needed} required")]
    InsufficientPrecision { precision: usize, needed: usize },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("not an affine equivalence: {0} is not a unit modulo {1}")]
    NotAffineEquivalence(String, String),

    #[error("enumeration too large: {size} exceeds cap {cap}")]
    EnumerationTooLarge { size: String, cap: u64 },

    #[error("point {0} lies outside [0, 1)")]
    OutOfUnitInterval(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("prime {p} is incompatible with table row {row}")]
    IncompatiblePrime { p: u64, row: String },

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
