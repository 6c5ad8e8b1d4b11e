use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field order {p}^{m} exceeds 2^20")]
    FieldTooLarge { p: u32, m: u32 },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("modulus polynomial is reducible")]
    ReducibleModulus,
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field of order {0} has no primitive element of interest (need q >= 3)")]
    NoPrimitiveElement(u32),
    #[error("element index {value} out of range for field of order {q}")]
    ElementOutOfRange { value: u32, q: u32 },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("erasure pattern is unrecoverable")]
    Unrecoverable,
    #[error("received word is not a codeword")]
    NotACodeword,
    #[error("no codeword within the decoding radius")]
    DecodingFailure,
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("line index {index} out of range 1..={lines}")]
    LineOutOfRange { index: usize, lines: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
