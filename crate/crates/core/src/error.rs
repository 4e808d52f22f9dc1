use thiserror::Error;

/// Errors produced by storage, channel construction and kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit count {0} is outside the supported range 1..={max}", max = crate::MAX_QUBITS)]
    InvalidQubitCount(usize),

    #[error("tile exponent {0} is outside the supported range 0..={max}", max = crate::MAX_TILE_EXP)]
    InvalidTileExponent(u32),

    #[error("index ({row}, {col}) out of range for dimension {dim}")]
    IndexOutOfRange { row: usize, col: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid target qubits {targets:?} for {n} qubits: {reason}")]
    InvalidTargets {
        targets: Vec<usize>,
        n: usize,
        reason: &'static str,
    },

    #[error("failed to allocate {0} complex values")]
    Allocation(usize),

    #[error("kraus set is empty")]
    EmptyKraus,

    #[error("kraus rank {rank} exceeds the bound {bound} for locality {k}")]
    KrausRankExceeded { rank: usize, bound: usize, k: usize },

    #[error("unsupported locality {0}")]
    UnsupportedLocality(usize),

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("phase {0} does not have unit modulus")]
    NonUnitPhase(num_complex::Complex64),

    #[error("unknown gate '{0}'")]
    UnknownGate(String),

    #[error("gate '{name}' expects {expected} parameter(s), got {actual}")]
    GateParameters {
        name: String,
        expected: usize,
        actual: usize,
    },

    #[error("permutation table is not a bijection on 0..{0}")]
    NotAPermutation(usize),

    #[error("gate arity {expected} does not match {actual} target qubits")]
    ArityMismatch { expected: usize, actual: usize },

    #[error("operands differ in size: {0} vs {1} qubits")]
    SizeMismatch(usize, usize),

    #[error("bad magic bytes {0:?}")]
    BadMagic([u8; 4]),

    #[error("unsupported file version {0}")]
    VersionMismatch(u32),

    #[error("unknown format tag {0}")]
    UnknownFormatTag(u8),

    #[error("malformed header: {0}")]
    MalformedHeader(&'static str),

    #[error("truncated payload: expected {expected} bytes, found {actual}")]
    Truncated { expected: usize, actual: usize },

    #[error("payload length mismatch: expected {expected} bytes, found {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
