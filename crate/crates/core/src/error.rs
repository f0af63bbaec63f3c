use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported qubit count {0} (supported range is 1..={max})", max = crate::MAX_QUBITS)]
    UnsupportedQubits(usize),

    #[error("index {index} out of range for {n} qubit(s) (must be < {bound})")]
    IndexOutOfRange {
        index: usize,
        n: usize,
        bound: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is {0} (expected 1)")]
    NotNormalized(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("non-negligible imaginary part {0:.3e} in a quantity that must be real")]
    ImaginaryResidue(f64),

    #[error("channel is not trace preserving (residual {0:.3e})")]
    NotTracePreserving(f64),

    #[error("Choi matrix is not positive semidefinite (min eigenvalue {0:.3e}); map is not completely positive")]
    NotCompletelyPositive(f64),

    #[error("invalid Kraus operator count {count} (must be in 1..={max})")]
    InvalidKrausCount { count: usize, max: usize },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("reconstruction matrix is singular (condition number {0:.3e})")]
    Singular(f64),

    #[error("seed state {index} is not pure (purity {purity})")]
    NotPure { index: usize, purity: f64 },

    #[error("missing measurement for configuration ({i}, {j})")]
    MissingMeasurement { i: usize, j: usize },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("parameter extraction is indeterminate: {0}")]
    Indeterminate(&'static str),

    #[error("independent evaluations disagree by {0:.3e}")]
    Inconsistent(f64),

    #[error("unknown name: {0}")]
    UnknownName(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
