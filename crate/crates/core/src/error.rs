use thiserror::Error;

/// Errors raised by the simulator, the circuit model and the fault harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("qubit count {0} outside 1..={max}", max = crate::statevector::MAX_QUBITS)]
    QubitCount(usize),

    #[error("qubit {qubit} out of range for a {count}-qubit state")]
    QubitIndex { qubit: usize, count: usize },

    #[error("gate operands must be distinct, got qubit {0} twice")]
    SameQubit(usize),

    #[error("bitstring {bits:?} does not describe {count} qubits")]
    Bitstring { bits: String, count: usize },

    #[error("dimension mismatch: {left} vs {right} qubits")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("cannot drop qubit {0}: it is not in a definite basis state")]
    Entangled(usize),

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("unknown fault location {0:?}")]
    UnknownLocation(String),

    #[error("invalid fault: {0}")]
    InvalidFault(String),

    #[error("invalid wiring: {0}")]
    InvalidWiring(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("report output failed: {0}")]
    Output(String),
}

pub type Result<T> = std::result::Result<T, Error>;
