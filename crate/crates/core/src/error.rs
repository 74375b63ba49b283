use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime below 2^16")]
    InvalidModulus(u32),
    #[error("operands live over different fields (q={left} vs q={right})")]
    FieldMismatch { left: u16, right: u16 },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("rank {r} out of range for size {n}")]
    RankOutOfRange { r: usize, n: usize },
    #[error("coefficient vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("field element {value} not reduced mod {q}")]
    UnreducedElement { value: u32, q: u16 },
    #[error("malformed encoding: {0}")]
    Encoding(&'static str),
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("enumeration of {size_log2:.1} bits exceeds the brute-force cap of 2^{cap_log2}")]
    CapExceeded { size_log2: f64, cap_log2: u32 },
    #[error("prover round state already answered a challenge")]
    StateConsumed,
    #[error("challenge {0} out of range")]
    InvalidChallenge(u8),
    #[error("session needs at least one round")]
    ZeroRounds,
    #[error("extraction needs at least 3 valid responses, got {0}")]
    TooFewResponses(usize),
    #[error("response to challenge {0} does not verify")]
    InvalidResponse(u8),
    #[error("binding violation: two openings of {0} disagree")]
    BindingViolation(&'static str),
    #[error("extracted coefficients fail the rank condition")]
    ExtractionFailed,
    #[error("cannot forge responses to challenges {0:?} without the secret")]
    Unforgeable([bool; 4]),
}
