use thiserror::Error;

/// Errors reported by the library. Decoding failures are not errors; they are
/// returned as [`crate::gabidulin::DecodeOutcome::Failure`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base field order {0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("F_{q}^{m} does not fit the packed 128-bit element representation")]
    FieldTooLarge { q: u32, m: usize },
    #[error("modulus must be a monic polynomial of degree {expected}")]
    BadModulus { expected: usize },
    #[error("modulus is reducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("digit {digit} is not an element of F_{q}")]
    DigitOutOfRange { digit: u32, q: u32 },
    #[error("expected {expected} entries, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid code parameters: {0}")]
    InvalidCode(String),
    #[error("locators are linearly dependent over F_q (rank {rank} < n = {n})")]
    DependentLocators { rank: usize, n: usize },
    #[error("column-erasure matrix has rank {rank}, expected full row rank {rows}")]
    RankDeficientErasures { rank: usize, rows: usize },
    #[error("row erasures are not supported; pass an empty row-erasure part")]
    RowErasuresUnsupported,
    #[error("{gamma} column erasures exceed the redundancy n - k = {redundancy}")]
    TooManyErasures { gamma: usize, redundancy: usize },
    #[error("word is not a codeword")]
    NotACodeword,
    #[error("enumeration needs {needed} candidates, cap is {cap}")]
    CapExceeded { needed: String, cap: u128 },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
