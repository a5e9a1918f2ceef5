use thiserror::Error;

/// Errors raised by the simulator, the protocols and the attack drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown state label `{0}`")]
    UnknownLabel(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid target qubits {targets:?} for a {num_qubits}-qubit state")]
    InvalidTargets {
        targets: Vec<usize>,
        num_qubits: usize,
    },

    #[error("unsupported qubit count {0}")]
    QubitCount(usize),

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("non-finite amplitude")]
    NonFinite,

    #[error("operator is not unitary")]
    NotUnitary,

    #[error("basis vectors are not orthonormal")]
    NotOrthonormal,

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("invalid bid: {0}")]
    InvalidBid(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("protocol fault: {0}")]
    ProtocolFault(String),

    #[error("no shared key between bidders {0} and {1}")]
    MissingKey(usize, usize),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
