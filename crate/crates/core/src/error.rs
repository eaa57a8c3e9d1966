use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("malformed key: {0}")]
    MalformedKey(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown subsystem `{0}`")]
    UnknownSubsystem(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("{qubits} qubits exceeds the exhaustive enumeration limit of {limit}")]
    TooLarge { qubits: usize, limit: usize },

    #[error("measurement outcome has zero probability")]
    ZeroProbability,

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("element {0} is outside the permutation domain")]
    OutsideDomain(u64),

    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("invalid ciphertext: {0}")]
    InvalidCiphertext(String),

    #[error("oracle policy violation: {0}")]
    PolicyViolation(String),

    #[error("oracle budget of {0} calls exhausted")]
    BudgetExhausted(usize),

    #[error("exact enumeration exceeded the cap of {0} branches")]
    EnumerationCap(u64),

    #[error("role is not deterministic given its coins: {0}")]
    NonDeterministicRole(String),

    #[error("game mode error: {0}")]
    Mode(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("serialization error: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
