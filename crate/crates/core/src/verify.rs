//! Cross-consistency suite: compressed simulation against the dense reference.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{QuiddMatrix, QuiddVector};
use crate::dd::Manager;
use crate::error::{Error, Result};
use crate::gates::{OraclePattern, PatternBit};
use crate::grover::{GroverDriver, GroverInstance};
use crate::reference::{self, DenseMatrix};
use crate::terminal::ToleranceConfig;

/// Elementwise tolerance of every comparison in the suite.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

/// Largest data-register size the suite accepts.
pub const MAX_VERIFY_DATA_QUBITS: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub max_data_qubits: u32,
    pub seed: u64,
    /// Extra random patterns per size above the exhaustive range.
    pub random_patterns: usize,
    pub random_circuits: usize,
    pub circuit_qubits: u32,
    pub circuit_gates: usize,
    /// Corrupts one terminal of the first instance. Negative control.
    pub inject_fault: bool,
    pub tolerance: ToleranceConfig,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            max_data_qubits: 6,
            seed: 2003,
            random_patterns: 2,
            random_circuits: 20,
            circuit_qubits: 5,
            circuit_gates: 100,
            inject_fault: false,
            tolerance: ToleranceConfig::default(),
        }
    }
}

/// First element where the two simulations disagree.
#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub step: u64,
    pub index: usize,
    pub quidd: Complex64,
    pub dense: Complex64,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {} index {}: quidd {} vs dense {}",
            self.step, self.index, self.quidd, self.dense
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub name: String,
    pub max_error: f64,
    pub divergence: Option<Divergence>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.divergence.is_none()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub cases: Vec<CaseResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.cases.iter().all(CaseResult::passed)
    }

    pub fn first_failure(&self) -> Option<&CaseResult> {
        self.cases.iter().find(|c| !c.passed())
    }
}

fn first_divergence(step: u64, quidd: &[Complex64], dense: &[Complex64], max_error: &mut f64) -> Option<Divergence> {
    let mut first = None;
    for (index, (&q, &d)) in quidd.iter().zip(dense).enumerate() {
        let err = (q - d).norm();
        *max_error = max_error.max(err);
        if first.is_none() && !(err <= VERIFY_TOLERANCE) {
            first = Some(Divergence {
                step,
                index,
                quidd: q,
                dense: d,
            });
        }
    }
    if first.is_none() && quidd.len() != dense.len() {
        first = Some(Divergence {
            step,
            index: quidd.len().min(dense.len()),
            quidd: Complex64::new(f64::NAN, 0.0),
            dense: Complex64::new(f64::NAN, 0.0),
        });
    }
    first
}

/// Scales the value of one terminal reachable from `v`.
fn corrupt(mgr: &mut Manager, v: &QuiddVector) {
    let mut f = v.root();
    while let Some((hi, _)) = mgr.children(f) {
        f = hi;
    }
    let id = mgr.terminal_id(f).expect("descent ends at a terminal");
    let value = mgr.terminal_value(f).expect("terminal");
    mgr.corrupt_terminal_for_testing(id, value * 1.5 + Complex64::new(0.25, 0.125));
}

/// Compares every iteration of one Grover instance, up to `iterations`.
pub fn verify_grover(
    pattern: &OraclePattern,
    iterations: u64,
    tolerance: ToleranceConfig,
    inject_fault: bool,
) -> Result<CaseResult> {
    let k = pattern.len() as u32;
    let dense = reference::dense_grover(pattern, iterations)?;
    let mut mgr = Manager::with_tolerance(tolerance);
    let inst = GroverInstance::new(&mut mgr, k, pattern.clone())?;
    let mut driver = GroverDriver::new(&mut mgr, &inst)?;
    if inject_fault {
        let s = driver.state();
        corrupt(driver.manager_mut(), &s);
    }
    let mut max_error = 0.0f64;
    let mut divergence = None;
    for (step, expected) in dense.states.iter().enumerate() {
        if step > 0 {
            match driver.iterate() {
                Ok(()) => {}
                Err(e) if e.is_numerical() && inject_fault => {
                    divergence = Some(Divergence {
                        step: step as u64,
                        index: 0,
                        quidd: Complex64::new(f64::NAN, 0.0),
                        dense: expected[0],
                    });
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let got = driver.manager().vector_to_dense(&driver.state())?;
        divergence = first_divergence(step as u64, &got, expected, &mut max_error);
        if divergence.is_none() {
            let p = driver.success_probability()?;
            let err = (p - dense.probabilities[step]).abs();
            max_error = max_error.max(err);
            if !(err <= VERIFY_TOLERANCE) {
                divergence = Some(Divergence {
                    step: step as u64,
                    index: usize::MAX,
                    quidd: Complex64::new(p, 0.0),
                    dense: Complex64::new(dense.probabilities[step], 0.0),
                });
            }
        }
        if divergence.is_some() {
            break;
        }
    }
    Ok(CaseResult {
        name: format!("grover k={k} pattern={pattern}"),
        max_error,
        divergence,
    })
}

/// Every pattern of length `k` with at most `max_free` don't-cares.
pub fn patterns_with_free(k: usize, max_free: usize) -> Vec<OraclePattern> {
    let mut out = Vec::new();
    let total = 3usize.pow(k as u32);
    for code in 0..total {
        let mut c = code;
        let mut bits = Vec::with_capacity(k);
        for _ in 0..k {
            bits.push(match c % 3 {
                0 => PatternBit::Zero,
                1 => PatternBit::One,
                _ => PatternBit::DontCare,
            });
            c /= 3;
        }
        if bits.iter().filter(|b| **b == PatternBit::DontCare).count() <= max_free {
            out.push(OraclePattern::new(bits).expect("non-empty"));
        }
    }
    out
}

fn random_pattern(k: usize, rng: &mut ChaCha8Rng) -> OraclePattern {
    let bits = (0..k)
        .map(|_| match rng.gen_range(0..4) {
            0 => PatternBit::Zero,
            1 => PatternBit::One,
            2 => PatternBit::DontCare,
            _ => PatternBit::One,
        })
        .collect();
    OraclePattern::new(bits).expect("non-empty")
}

/// Patterns checked for `k` data qubits.
pub fn verify_patterns(k: usize, random: usize, rng: &mut ChaCha8Rng) -> Vec<OraclePattern> {
    if k <= 6 {
        return patterns_with_free(k, 2);
    }
    let mut out: Vec<_> = (0..4.min(k + 1))
        .map(|free| OraclePattern::ones_then_dont_cares(k, free).expect("valid"))
        .collect();
    out.extend((0..random).map(|_| random_pattern(k, rng)));
    out
}

/// One gate of a random test circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitGate {
    H(u32),
    X(u32),
    Cnot(u32, u32),
}

pub fn random_circuit(qubits: u32, gates: usize, rng: &mut impl Rng) -> Vec<CircuitGate> {
    (0..gates)
        .map(|_| match rng.gen_range(0..3) {
            0 => CircuitGate::H(rng.gen_range(0..qubits)),
            1 => CircuitGate::X(rng.gen_range(0..qubits)),
            _ => {
                let c = rng.gen_range(0..qubits);
                let t = (c + rng.gen_range(1..qubits)) % qubits;
                CircuitGate::Cnot(c, t)
            }
        })
        .collect()
}

pub fn circuit_gate_matrix(mgr: &mut Manager, g: CircuitGate, qubits: u32) -> Result<QuiddMatrix> {
    match g {
        CircuitGate::H(t) => {
            let h = mgr.hadamard()?;
            mgr.lift(&h, t, qubits)
        }
        CircuitGate::X(t) => {
            let x = mgr.pauli_x()?;
            mgr.lift(&x, t, qubits)
        }
        CircuitGate::Cnot(c, t) => mgr.cnot(c, t, qubits),
    }
}

pub fn dense_circuit_gate(g: CircuitGate, qubits: u32) -> Result<DenseMatrix> {
    match g {
        CircuitGate::H(t) => reference::dense_lift(&reference::dense_hadamard(1)?, t, qubits),
        CircuitGate::X(t) => reference::dense_lift(&reference::dense_pauli_x(), t, qubits),
        CircuitGate::Cnot(c, t) => reference::dense_cnot(c, t, qubits),
    }
}

/// Runs a circuit on `|0...0>` both ways and also compares the accumulated
/// unitary.
pub fn verify_circuit(name: String, circuit: &[CircuitGate], qubits: u32, tolerance: ToleranceConfig) -> Result<CaseResult> {
    let mut mgr = Manager::with_tolerance(tolerance);
    let mut state = mgr.basis_vector(0, qubits)?;
    let mut unitary = mgr.identity(qubits)?;
    let mut dense_state = vec![Complex64::new(0.0, 0.0); 1 << qubits];
    dense_state[0] = Complex64::new(1.0, 0.0);
    let mut dense_unitary = reference::dense_identity(qubits)?;
    let mut max_error = 0.0f64;
    for (step, &g) in circuit.iter().enumerate() {
        let m = circuit_gate_matrix(&mut mgr, g, qubits)?;
        let d = dense_circuit_gate(g, qubits)?;
        state = mgr.matrix_vector_multiply(&m, &state)?;
        unitary = mgr.matrix_matrix_multiply(&m, &unitary)?;
        dense_state = reference::dense_matvec(&d, &dense_state)?;
        dense_unitary = reference::dense_matmul(&d, &dense_unitary)?;
        let got = mgr.vector_to_dense(&state)?;
        if let Some(div) = first_divergence(step as u64 + 1, &got, &dense_state, &mut max_error) {
            return Ok(CaseResult {
                name,
                max_error,
                divergence: Some(div),
            });
        }
    }
    let got = mgr.matrix_to_dense(&unitary)?;
    let divergence = first_divergence(circuit.len() as u64, &got, dense_unitary.as_slice(), &mut max_error);
    Ok(CaseResult {
        name,
        max_error,
        divergence,
    })
}

/// Runs the whole suite, calling `on_case` after each case.
pub fn run_suite(opts: &VerifyOptions, mut on_case: impl FnMut(&CaseResult)) -> Result<VerifyReport> {
    if opts.max_data_qubits == 0 || opts.max_data_qubits > MAX_VERIFY_DATA_QUBITS {
        return Err(Error::Usage(format!(
            "--max-data-qubits must be in 1..={MAX_VERIFY_DATA_QUBITS}, got {}",
            opts.max_data_qubits
        )));
    }
    if opts.circuit_qubits < 2 || opts.circuit_qubits > reference::MAX_DENSE_QUBITS {
        return Err(Error::Usage(format!("circuit width {} out of range", opts.circuit_qubits)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut report = VerifyReport::default();
    let mut fault = opts.inject_fault;
    for k in 1..=opts.max_data_qubits as usize {
        for pattern in verify_patterns(k, opts.random_patterns, &mut rng) {
            let boyer = crate::grover::boyer_iterations(pattern.solution_count(), 1 << k)?;
            let case = verify_grover(&pattern, boyer.max(1), opts.tolerance, fault)?;
            fault = false;
            on_case(&case);
            report.cases.push(case);
        }
    }
    for i in 0..opts.random_circuits {
        let circuit = random_circuit(opts.circuit_qubits, opts.circuit_gates, &mut rng);
        let name = format!("circuit #{i} ({} qubits, {} gates)", opts.circuit_qubits, opts.circuit_gates);
        let case = verify_circuit(name, &circuit, opts.circuit_qubits, opts.tolerance)?;
        on_case(&case);
        report.cases.push(case);
    }
    Ok(report)
}
