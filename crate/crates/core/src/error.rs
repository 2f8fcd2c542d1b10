use num_complex::Complex64;
use thiserror::Error;

use crate::dd::Variable;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite value {0}")]
    NonFinite(Complex64),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("invalid terminal id {0}")]
    InvalidTerminal(u32),

    #[error("node belongs to a different manager")]
    ManagerMismatch,

    #[error("variable {var} does not precede the children's top variables")]
    OrderViolation { var: Variable },

    #[error("variable {var} is outside the manager's {max_qubits}-qubit universe")]
    VariableOutOfRange { var: Variable, max_qubits: u32 },

    #[error("assignment does not cover variable {0}")]
    MissingVariable(Variable),

    #[error("variable map is not order preserving ({from} -> {to})")]
    NonMonotoneRemap { from: Variable, to: Variable },

    #[error("operands disagree in size: {left} vs {right} qubits")]
    DimensionMismatch { left: u32, right: u32 },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("dense conversion of {qubits} qubits exceeds the limit of {limit}")]
    DenseLimit { qubits: u32, limit: u32 },

    #[error("invalid pattern {0:?}: expected a non-empty string over {{0, 1, d}}")]
    InvalidPattern(String),

    #[error("pattern length {pattern} does not match {qubits} qubits")]
    PatternLength { pattern: usize, qubits: u32 },

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("state is not normalized (norm squared {0})")]
    Unnormalized(f64),

    #[error("norm drifted to {norm_squared} after iteration {iteration}")]
    NumericalIntegrity { iteration: u64, norm_squared: f64 },
}

impl Error {
    /// Failures caused by arithmetic drift rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NumericalIntegrity { .. })
    }
}
