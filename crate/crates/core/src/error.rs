use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("failed to read model file: {0}")]
    Io(#[from] std::io::Error),

    #[error("failed to parse model file: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("model validation failed: {0}")]
    Validation(String),

    #[error("inadmissible input: infinity norm {norm} exceeds 1")]
    Inadmissible { norm: f64 },

    #[error("operation requires exactly one uncontrolled actuator, got {0}")]
    NotSingleActuator(usize),

    #[error("uncontrolled drift invisible through B_c pseudoinverse")]
    InvisibleDrift,

    #[error("zero displacement has no optimal final time")]
    ZeroDisplacement,

    #[error("objective is flat on the search interval; minimizer sits at {0}")]
    FlatObjective(f64),

    #[error("target unreachable at this grid resolution")]
    Unreachable,

    #[error("integration failed at t = {time}: {reason}")]
    Integration { time: f64, reason: String },

    #[error("invalid signal sweep: {0}")]
    Sweep(String),

    #[error("invalid argument: {0}")]
    Argument(String),
}
