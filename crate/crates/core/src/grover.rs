//! Grover's search on compressed states.
//!
//! The circuit has `k` data qubits followed by one oracle qubit. The oracle
//! qubit starts in `|->` so that the bit-flip oracle acts as a phase flip on
//! matching data values. Each iteration applies the oracle, `H^{⊗k} ⊗ I`, the
//! conditional phase shift (as a terminal multiplication), and `H^{⊗k} ⊗ I`
//! again.

use std::io::Write;
use std::time::{Duration, Instant};

use num_complex::Complex64;

use crate::algebra::{QuiddMatrix, QuiddVector};
use crate::dd::{Manager, ManagerConfig};
use crate::error::{Error, Result};
use crate::gates::{OraclePattern, PatternBit};
use crate::terminal::ToleranceConfig;

/// Allowed drift of the state norm before a run is aborted.
pub const NORM_DRIFT_LIMIT: f64 = 1e-6;

/// Controls fixed by the "modulo 1024" oracle of the operator-size report.
pub const MODULO_ORACLE_CONTROLS: usize = 10;

/// Optimal iteration count `floor(pi / (4 sqrt(M/N)))` for `M` solutions in a
/// space of `N`.
pub fn boyer_iterations(solutions: u64, space: u64) -> Result<u64> {
    if solutions == 0 {
        return Err(Error::Usage("no solutions: the iteration count is undefined".into()));
    }
    if solutions > space || !space.is_power_of_two() {
        return Err(Error::Usage(format!(
            "need 1 <= M <= N with N a power of two, got M={solutions} N={space}"
        )));
    }
    let theta = (solutions as f64 / space as f64).sqrt();
    Ok((std::f64::consts::PI / (4.0 * theta)).floor() as u64)
}

/// Operators and initial state of one search problem.
#[derive(Debug, Clone)]
pub struct GroverInstance {
    pub pattern: OraclePattern,
    /// `H^{⊗n}` over all `k + 1` qubits.
    pub initial_hadamard: QuiddMatrix,
    /// `H^{⊗k} ⊗ I`.
    pub grover_hadamard: QuiddMatrix,
    pub oracle: QuiddMatrix,
    /// Diagonal of the phase shift on the data register, constant over the
    /// oracle qubit.
    pub phase_shift: QuiddVector,
    /// `|0...0>|1>`, the input of the initial Hadamards.
    pub initial_state: QuiddVector,
}

impl GroverInstance {
    pub fn new(mgr: &mut Manager, data_qubits: u32, pattern: OraclePattern) -> Result<Self> {
        if pattern.len() != data_qubits as usize {
            return Err(Error::PatternLength {
                pattern: pattern.len(),
                qubits: data_qubits,
            });
        }
        let k = data_qubits;
        let n = k + 1;
        let initial_hadamard = mgr.hadamard_n(n)?;
        let hk = mgr.hadamard_n(k)?;
        let id1 = mgr.identity(1)?;
        let grover_hadamard = mgr.tensor(&hk, &id1)?;
        let oracle = mgr.oracle_matrix(&pattern)?;
        let (_, cps) = mgr.conditional_phase_shift(k)?;
        let ones = mgr.constant_vector(Complex64::new(1.0, 0.0), 1)?;
        let phase_shift = mgr.tensor(&cps, &ones)?;
        let initial_state = mgr.basis_vector(1, n)?;
        Ok(Self {
            pattern,
            initial_hadamard,
            grover_hadamard,
            oracle,
            phase_shift,
            initial_state,
        })
    }

    pub fn data_qubits(&self) -> u32 {
        self.pattern.len() as u32
    }

    pub fn total_qubits(&self) -> u32 {
        self.data_qubits() + 1
    }

    pub fn solutions(&self) -> u64 {
        self.pattern.solution_count()
    }

    pub fn search_space(&self) -> u64 {
        1u64 << self.data_qubits()
    }

    pub fn optimal_iterations(&self) -> u64 {
        boyer_iterations(self.solutions(), self.search_space()).expect("pattern has at least one solution")
    }

    /// The solution event over the full register: the data pattern with a
    /// don't-care on the oracle qubit.
    pub fn success_pattern(&self) -> OraclePattern {
        self.pattern.extended(&[PatternBit::DontCare])
    }
}

/// Step-by-step execution of one instance.
pub struct GroverDriver<'a> {
    mgr: &'a mut Manager,
    instance: &'a GroverInstance,
    success: OraclePattern,
    state: QuiddVector,
    iteration: u64,
    peak_nodes: usize,
}

impl<'a> GroverDriver<'a> {
    /// Prepares the equal superposition with the oracle qubit in `|->`.
    pub fn new(mgr: &'a mut Manager, instance: &'a GroverInstance) -> Result<Self> {
        let state = mgr.matrix_vector_multiply(&instance.initial_hadamard, &instance.initial_state)?;
        let peak_nodes = mgr.node_count(state.root());
        Ok(Self {
            mgr,
            instance,
            success: instance.success_pattern(),
            state,
            iteration: 0,
            peak_nodes,
        })
    }

    pub fn state(&self) -> QuiddVector {
        self.state
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn manager(&self) -> &Manager {
        self.mgr
    }

    pub fn manager_mut(&mut self) -> &mut Manager {
        self.mgr
    }

    /// Largest node count among all intermediate states so far.
    pub fn peak_node_count(&self) -> usize {
        self.peak_nodes
    }

    fn track(&mut self, v: &QuiddVector) {
        self.peak_nodes = self.peak_nodes.max(self.mgr.node_count(v.root()));
    }

    pub fn success_probability(&self) -> Result<f64> {
        self.mgr.pattern_probability(&self.state, &self.success)
    }

    pub fn iterate(&mut self) -> Result<()> {
        let inst = self.instance;
        let s = self.mgr.matrix_vector_multiply(&inst.oracle, &self.state)?;
        self.track(&s);
        let s = self.mgr.matrix_vector_multiply(&inst.grover_hadamard, &s)?;
        self.track(&s);
        let s = self.mgr.elementwise_multiply(&inst.phase_shift, &s)?;
        self.track(&s);
        let s = self.mgr.matrix_vector_multiply(&inst.grover_hadamard, &s)?;
        self.track(&s);
        self.state = s;
        self.iteration += 1;
        // every iteration creates fresh amplitudes, so old apply results never hit again
        self.mgr.clear_caches();
        let norm_squared = self.mgr.norm_squared(&s)?;
        if (norm_squared - 1.0).abs() > NORM_DRIFT_LIMIT {
            return Err(Error::NumericalIntegrity {
                iteration: self.iteration,
                norm_squared,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    /// Overrides the optimal iteration count.
    pub iterations: Option<u64>,
    /// Record the success probability after every iteration.
    pub trace: bool,
    /// Measure the final state with this seed.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iteration: u64,
    pub success_probability: f64,
    pub state_node_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroverTrace {
    /// Iteration 0 is the prepared superposition. With tracing off only the
    /// final record is kept.
    pub records: Vec<TraceRecord>,
    pub optimal_iterations: u64,
    pub iterations: u64,
    pub final_success_probability: f64,
    pub measured_index: Option<u64>,
    pub wall_time: Duration,
    pub peak_node_count: usize,
}

impl GroverTrace {
    /// Iteration with the largest recorded success probability.
    pub fn peak_iteration(&self) -> Option<u64> {
        self.records
            .iter()
            .max_by(|a, b| a.success_probability.total_cmp(&b.success_probability))
            .map(|r| r.iteration)
    }

    /// CSV with header `iteration,success_probability,node_count`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let io = |e: csv::Error| Error::Usage(format!("writing CSV: {e}"));
        w.write_record(["iteration", "success_probability", "node_count"]).map_err(io)?;
        for r in &self.records {
            w.write_record([
                r.iteration.to_string(),
                format_float(r.success_probability),
                r.state_node_count.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Usage(format!("writing CSV: {e}")))?;
        Ok(())
    }
}

/// Floats in CSV output: 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Runs an instance end to end on `mgr`.
pub fn run(mgr: &mut Manager, instance: &GroverInstance, opts: RunOptions) -> Result<GroverTrace> {
    let start = Instant::now();
    let optimal_iterations = instance.optimal_iterations();
    let iterations = opts.iterations.unwrap_or(optimal_iterations);
    let mut driver = GroverDriver::new(mgr, instance)?;
    let mut records = Vec::new();
    let record = |d: &GroverDriver<'_>| -> Result<TraceRecord> {
        Ok(TraceRecord {
            iteration: d.iteration(),
            success_probability: d.success_probability()?,
            state_node_count: d.manager().node_count(d.state().root()),
        })
    };
    if opts.trace {
        records.push(record(&driver)?);
    }
    for _ in 0..iterations {
        driver.iterate()?;
        if opts.trace {
            records.push(record(&driver)?);
        }
    }
    if !opts.trace {
        records.push(record(&driver)?);
    }
    let final_success_probability = records.last().map(|r| r.success_probability).unwrap_or(0.0);
    let peak_node_count = driver.peak_node_count();
    let state = driver.state();
    let measured_index = match opts.seed {
        Some(seed) => Some(mgr.measure(&state, seed)?.basis_index),
        None => None,
    };
    Ok(GroverTrace {
        records,
        optimal_iterations,
        iterations,
        final_success_probability,
        measured_index,
        wall_time: start.elapsed(),
        peak_node_count,
    })
}

/// Node counts of the Grover operators for an `n`-qubit circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OperatorSizes {
    pub qubits: u32,
    pub initial_hadamard: usize,
    pub grover_hadamard: usize,
    pub conditional_phase_shift: usize,
    pub oracle_all_ones: usize,
    pub oracle_modulo: usize,
}

/// Pattern of the "modulo 1024" oracle: ten fixed controls followed by
/// don't-cares. Fewer data qubits keep all positions as controls.
pub fn modulo_oracle_pattern(data_qubits: usize) -> Result<OraclePattern> {
    let controls = MODULO_ORACLE_CONTROLS.min(data_qubits);
    OraclePattern::ones_then_dont_cares(data_qubits, data_qubits - controls)
}

/// Builds each operator of an `n`-qubit circuit in a fresh manager and counts
/// its nodes.
///
/// The manager's tolerance is scaled below the Hadamard amplitude
/// `2^{-n/2}`, otherwise `+-2^{-n/2}` would be merged with each other (and
/// with zero) for large `n`.
pub fn operator_size_report(qubits: u32) -> Result<OperatorSizes> {
    if qubits < 2 {
        return Err(Error::Usage("the circuit needs at least two qubits".into()));
    }
    let k = qubits - 1;
    let amplitude = (-(qubits as f64) / 2.0).exp2();
    let eps = crate::terminal::DEFAULT_EPS.min(amplitude * 1e-6);
    let mut mgr = Manager::new(ManagerConfig {
        max_qubits: qubits,
        tolerance: ToleranceConfig::new(eps)?,
        ..ManagerConfig::default()
    });
    let count = |m: &Manager, root| m.node_count(root);
    let initial = mgr.hadamard_n(qubits)?;
    let hk = mgr.hadamard_n(k)?;
    let id1 = mgr.identity(1)?;
    let grover = mgr.tensor(&hk, &id1)?;
    let (_, cps) = mgr.conditional_phase_shift(k)?;
    let ones = mgr.constant_vector(Complex64::new(1.0, 0.0), 1)?;
    let cps = mgr.tensor(&cps, &ones)?;
    let oracle1 = mgr.oracle_matrix(&OraclePattern::all_ones(k as usize)?)?;
    let oracle2 = mgr.oracle_matrix(&modulo_oracle_pattern(k as usize)?)?;
    Ok(OperatorSizes {
        qubits,
        initial_hadamard: count(&mgr, initial.root()),
        grover_hadamard: count(&mgr, grover.root()),
        conditional_phase_shift: count(&mgr, cps.root()),
        oracle_all_ones: count(&mgr, oracle1.root()),
        oracle_modulo: count(&mgr, oracle2.root()),
    })
}

pub fn write_operator_sizes_csv<W: Write>(rows: &[OperatorSizes], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Usage(format!("writing CSV: {e}"));
    w.write_record([
        "n",
        "initial_hadamard",
        "grover_hadamard",
        "conditional_phase_shift",
        "oracle_1",
        "oracle_2",
    ])
    .map_err(io)?;
    for r in rows {
        w.write_record([
            r.qubits.to_string(),
            r.initial_hadamard.to_string(),
            r.grover_hadamard.to_string(),
            r.conditional_phase_shift.to_string(),
            r.oracle_all_ones.to_string(),
            r.oracle_modulo.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Usage(format!("writing CSV: {e}")))?;
    Ok(())
}

/// One row of the scaling benchmark.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub data_qubits: u32,
    pub iterations: u64,
    pub wall_time: Duration,
    pub peak_node_count: usize,
}

/// Runs the all-ones search for `k` data qubits in a fresh manager, taking the
/// fastest of `repeats` runs.
pub fn bench_one(k: u32, repeats: u32, tolerance: ToleranceConfig) -> Result<BenchRow> {
    let mut best: Option<BenchRow> = None;
    for _ in 0..repeats.max(1) {
        let mut mgr = Manager::with_tolerance(tolerance);
        let start = Instant::now();
        let inst = GroverInstance::new(&mut mgr, k, OraclePattern::all_ones(k as usize)?)?;
        let trace = run(&mut mgr, &inst, RunOptions::default())?;
        let row = BenchRow {
            data_qubits: k,
            iterations: trace.iterations,
            wall_time: start.elapsed(),
            peak_node_count: trace.peak_node_count,
        };
        if best.is_none_or(|b| row.wall_time < b.wall_time) {
            best = Some(row);
        }
    }
    Ok(best.expect("at least one repeat"))
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Usage(format!("writing CSV: {e}"));
    w.write_record(["data_qubits", "iterations", "wall_time_s", "peak_node_count"])
        .map_err(io)?;
    for r in rows {
        w.write_record([
            r.data_qubits.to_string(),
            r.iterations.to_string(),
            format_float(r.wall_time.as_secs_f64()),
            r.peak_node_count.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::Usage(format!("writing CSV: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boyer_small_cases() {
        assert_eq!(boyer_iterations(1, 16).unwrap(), 3);
        assert_eq!(boyer_iterations(1, 1024).unwrap(), 25);
        assert_eq!(boyer_iterations(1, 4096).unwrap(), 50);
        assert_eq!(boyer_iterations(8, 4096).unwrap(), 17);
        assert_eq!(boyer_iterations(64, 64).unwrap(), 0);
        assert!(boyer_iterations(0, 16).is_err());
        assert!(boyer_iterations(17, 16).is_err());
        assert!(boyer_iterations(1, 12).is_err());
    }

    #[test]
    fn instance_parameters() {
        let mut m = Manager::default();
        let i = GroverInstance::new(&mut m, 10, OraclePattern::all_ones(10).unwrap()).unwrap();
        assert_eq!((i.solutions(), i.search_space(), i.optimal_iterations()), (1, 1024, 25));
        let i = GroverInstance::new(&mut m, 10, "11111111dd".parse().unwrap()).unwrap();
        assert_eq!((i.solutions(), i.optimal_iterations()), (4, 12));
        let i = GroverInstance::new(&mut m, 3, "ddd".parse().unwrap()).unwrap();
        assert_eq!((i.solutions(), i.search_space(), i.optimal_iterations()), (8, 8, 0));
        assert!(GroverInstance::new(&mut m, 4, "111".parse().unwrap()).is_err());
    }

    #[test]
    fn trace_starts_uniform() {
        let mut m = Manager::default();
        let i = GroverInstance::new(&mut m, 10, OraclePattern::all_ones(10).unwrap()).unwrap();
        let t = run(
            &mut m,
            &i,
            RunOptions {
                iterations: Some(0),
                trace: true,
                seed: None,
            },
        )
        .unwrap();
        assert_eq!(t.records.len(), 1);
        assert!((t.records[0].success_probability - 1.0 / 1024.0).abs() < 1e-15);
    }

    #[test]
    fn full_search_finds_the_key() {
        let mut m = Manager::default();
        let i = GroverInstance::new(&mut m, 10, OraclePattern::all_ones(10).unwrap()).unwrap();
        let t = run(
            &mut m,
            &i,
            RunOptions {
                iterations: None,
                trace: true,
                seed: Some(7),
            },
        )
        .unwrap();
        assert_eq!(t.iterations, 25);
        assert_eq!(t.records.len(), 26);
        assert!(t.final_success_probability > 0.99);
        assert_eq!(t.peak_iteration(), Some(25));
        assert!(t.measured_index.is_some());
    }

    #[test]
    fn everything_is_a_solution() {
        let mut m = Manager::default();
        let i = GroverInstance::new(&mut m, 3, "ddd".parse().unwrap()).unwrap();
        let t = run(&mut m, &i, RunOptions::default()).unwrap();
        assert_eq!(t.iterations, 0);
        assert!((t.final_success_probability - 1.0).abs() < 1e-12);
    }

    #[test]
    fn table_row_twenty() {
        let r = operator_size_report(20).unwrap();
        assert_eq!(
            (
                r.initial_hadamard,
                r.grover_hadamard,
                r.conditional_phase_shift,
                r.oracle_all_ones,
                r.oracle_modulo
            ),
            (80, 83, 21, 99, 108)
        );
        assert!(operator_size_report(1).is_err());
    }

    #[test]
    fn trace_csv_layout() {
        let t = GroverTrace {
            records: vec![TraceRecord {
                iteration: 0,
                success_probability: 0.25,
                state_node_count: 3,
            }],
            optimal_iterations: 1,
            iterations: 0,
            final_success_probability: 0.25,
            measured_index: None,
            wall_time: Duration::ZERO,
            peak_node_count: 3,
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "iteration,success_probability,node_count\n0,2.5000000000000000e-1,3\n"
        );
    }
}
