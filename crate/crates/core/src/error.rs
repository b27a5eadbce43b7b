use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OltError {
    #[error("dimension {0} is not a power of two >= 2")]
    BadDimension(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("qubit index {index} out of range for a {n}-qubit register")]
    QubitOutOfRange { index: usize, n: usize },

    #[error("qubit index {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("operator is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is {0} instead of 1")]
    TraceViolation(f64),

    #[error("negative eigenvalue {0} below tolerance")]
    NegativeEigenvalue(f64),

    #[error("expectation value has imaginary residue {0:.3e}")]
    ImaginaryResidue(f64),

    #[error("state vector norm is {0} instead of 1")]
    NotNormalized(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("party count mismatch: {what} has {got} parties, expected {expected}")]
    PartyMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("shape mismatch: functional has shape {expected:?}, table has {got:?}")]
    ShapeMismatch { expected: Vec<usize>, got: Vec<usize> },

    #[error("strategy enumeration needs 2^{bits} assignments, cap is 2^{cap}")]
    EnumerationCap { bits: usize, cap: usize },

    #[error("angle setting mode mismatch: expected {0}")]
    ModeMismatch(&'static str),

    #[error("line {line}, field `{field}`: {message}")]
    Parse {
        line: usize,
        field: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, OltError>;
