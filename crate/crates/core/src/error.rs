use thiserror::Error;

/// Errors raised by the analysis library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("invalid density matrix: {reason} (residual {residual:e})")]
    InvalidDensity { reason: &'static str, residual: f64 },

    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("map is not trace preserving (residual {residual:e})")]
    NotTracePreserving { residual: f64 },

    #[error("invalid projector set: {reason} (residual {residual:e})")]
    InvalidProjectors { reason: &'static str, residual: f64 },

    #[error("invalid stochastic matrix: {reason} (residual {residual:e})")]
    InvalidStochastic { reason: &'static str, residual: f64 },

    #[error("matrix is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),

    #[error("gate `{name}` expects {expected} parameter(s), got {got}")]
    GateArity { name: String, expected: usize, got: usize },

    #[error("gate `{name}` acts on {expected} qubit(s), requested {got}")]
    QubitCount { name: String, expected: usize, got: usize },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("singular linear system")]
    Singular,

    #[error("{0}")]
    Unsupported(String),

    #[error(transparent)]
    Sdp(#[from] crate::sdp::SdpError),
}

pub type Result<T> = std::result::Result<T, Error>;
