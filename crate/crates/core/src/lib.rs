//! Quantum states and operators as algebraic decision diagrams.
//!
//! Vectors and matrices of size `2^n` are stored as reduced, ordered
//! multi-terminal decision diagrams over interleaved row and column
//! variables. Repeated structure, as in tensor products of small gates,
//! collapses into shared nodes, so states and operators of Grover's algorithm
//! stay polynomial in the number of qubits.
//!
//! ```
//! use quidd::{Manager, OraclePattern, GroverInstance, RunOptions, run};
//!
//! let mut mgr = Manager::default();
//! let pattern: OraclePattern = "11111".parse().unwrap();
//! let inst = GroverInstance::new(&mut mgr, 5, pattern).unwrap();
//! let trace = run(&mut mgr, &inst, RunOptions::default()).unwrap();
//! assert_eq!(trace.iterations, 4);
//! assert!(trace.final_success_probability > 0.99);
//! ```

pub mod algebra;
pub mod dd;
pub mod error;
pub mod gates;
pub mod grover;
pub mod measure;
pub mod reference;
pub mod terminal;
pub mod verify;

pub use algebra::{Quidd, QuiddMatrix, QuiddVector};
pub use dd::{BinaryOp, Manager, ManagerConfig, NodeRef, VarKind, Variable};
pub use error::{Error, Result};
pub use gates::{GateSpec, OraclePattern, PatternBit};
pub use grover::{
    boyer_iterations, operator_size_report, run, BenchRow, GroverDriver, GroverInstance, GroverTrace,
    OperatorSizes, RunOptions, TraceRecord,
};
pub use measure::MeasurementOutcome;
pub use terminal::{ComplexValue, TerminalId, ToleranceConfig, DEFAULT_EPS};
