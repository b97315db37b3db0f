use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("polynomial {poly} is not irreducible modulo {p}")]
    PolynomialNotIrreducibleModP { poly: String, p: u64 },
    #[error("polynomial {poly} is not Eisenstein at {p}")]
    NotEisenstein { poly: String, p: u64 },
    #[error("fields with both e > 1 and f > 1 are not supported")]
    MixedRamification,
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: String, found: String },
    #[error("size guard exceeded: {what} = {value} > {limit}")]
    SizeGuardExceeded { what: &'static str, value: u64, limit: u64 },
    #[error("bad transition target: {0}")]
    BadTarget(String),
    #[error("inverse temperature must be positive, got {0}")]
    NonpositiveBeta(f64),
    #[error("inverse temperature must exceed 1, got {0}")]
    BetaNotAboveOne(f64),
    #[error("series converges for inverse temperature {0} > 1")]
    BetaAboveOne(f64),
    #[error("measure has total mass {0}, expected 1")]
    MassNotOne(String),
    #[error("truncation {n} too small for combined shift degree {degree}")]
    TruncationTooSmall { n: usize, degree: u32 },
    #[error("window {window} too small, need at least {min}")]
    WindowTooSmall { window: u32, min: u32 },
    #[error("support of the measure touches the window boundary at valuation {0}")]
    SupportTouchesBoundary(i64),
    #[error("incoherent tower: {0}")]
    IncoherentTower(String),
    #[error("precision exceeded: point known to level {known}, requested {requested}")]
    PrecisionExceeded { known: u32, requested: u32 },
    #[error("unsupported global field: {0}")]
    UnsupportedField(String),
    #[error("search guard exceeded: bound {0}")]
    GuardExceeded(u64),
    #[error("exact arithmetic requires an integer inverse temperature")]
    InexactBeta,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn level_mismatch(expected: impl ToString, found: impl ToString) -> Error {
    Error::LevelMismatch {
        expected: expected.to_string(),
        found: found.to_string(),
    }
}
