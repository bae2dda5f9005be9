use thiserror::Error;

use crate::ring::ExtensionKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension kind {kind:?} is not available for p = {p}")]
    KindMismatch { p: u64, kind: ExtensionKind },
    #[error("x^2 - ({s})x - ({t}) is reducible mod {p}")]
    ReducibleQuadratic { p: u64, s: i64, t: i64 },
    #[error("unit parameter {0} is not a p-adic unit")]
    BadUnitParam(i64),
    #[error("truncation exponent must be positive")]
    ZeroTruncation,
    #[error("truncation p^{0} does not fit the 62-bit digit arithmetic")]
    TruncationTooLarge(u32),
    #[error("elements or matrices belong to different rings")]
    SpecMismatch,
    #[error("element is not a unit")]
    NotUnit,
    #[error("clamp {clamp} must lie in 1..={trunc}")]
    BadClamp { clamp: u32, trunc: u32 },
    #[error("matrix is not Hermitian at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("invalid distribution: {0}")]
    Distribution(String),
    #[error("invalid partition: {0}")]
    Partition(String),
    #[error("rational evaluation did not produce an integer: {0}")]
    NonIntegral(String),
    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("pairing count for {0} is not cached")]
    PairingUnavailable(String),
    #[error("instance too large for the character-sum oracle: {0}")]
    InstanceTooLarge(String),
    #[error("classification failed: {0}")]
    Classification(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
