use thiserror::Error;

/// Errors raised while constructing or simulating circuits.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("qubit {qubit} out of range for circuit width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },
    #[error("targets and controls overlap on qubit {0}")]
    OverlappingQubits(usize),
    #[error("gate parameter is not finite")]
    NonFiniteParameter,
    #[error("state dimension {got} does not match circuit dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("circuit width {got} does not match expected width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("matrix dimension {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("invalid qubit remap: {0}")]
    InvalidRemap(String),
}

/// Errors raised by encoding constructors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EncodingError {
    #[error("rotation argument {value} lies outside [-1, 1]; encoding infeasible")]
    InfeasibleAngle { value: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

/// Errors raised by the signal-processing layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QspError {
    #[error("evaluation point {0} lies outside [-1, 1]")]
    OutOfDomain(f64),
    #[error("invalid degree {0}")]
    InvalidDegree(usize),
    #[error("invalid target polynomial: {0}")]
    InvalidTarget(String),
    #[error("phase solver did not converge; best objective {residual:.3e}")]
    NoConvergence { residual: f64 },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}
