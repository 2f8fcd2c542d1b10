//! Operators for Grover's algorithm and small Clifford-style circuits.
//!
//! Everything here is assembled structurally, either node by node or by
//! tensoring smaller operators. Nothing passes through a dense array.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::algebra::{QuiddMatrix, QuiddVector};
use crate::dd::{Id, Manager, Variable};
use crate::error::{Error, Result};

/// One position of a bit pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternBit {
    Zero,
    One,
    DontCare,
}

impl PatternBit {
    pub fn matches(self, bit: bool) -> bool {
        match self {
            PatternBit::Zero => !bit,
            PatternBit::One => bit,
            PatternBit::DontCare => true,
        }
    }
}

/// A string over `{0, 1, d}`, position 0 being the most significant qubit.
///
/// Used both as an oracle filter (which data-register values to accept) and
/// as a measurement event.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OraclePattern {
    bits: Vec<PatternBit>,
}

impl OraclePattern {
    pub fn new(bits: Vec<PatternBit>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidPattern(String::new()));
        }
        Ok(Self { bits })
    }

    /// Every position set to `1`.
    pub fn all_ones(len: usize) -> Result<Self> {
        Self::new(vec![PatternBit::One; len])
    }

    pub fn all_dont_care(len: usize) -> Result<Self> {
        Self::new(vec![PatternBit::DontCare; len])
    }

    /// `len - free` ones followed by `free` don't-cares.
    pub fn ones_then_dont_cares(len: usize, free: usize) -> Result<Self> {
        if free > len {
            return Err(Error::Usage(format!("{free} don't-cares exceed pattern length {len}")));
        }
        let mut bits = vec![PatternBit::One; len - free];
        bits.extend(std::iter::repeat_n(PatternBit::DontCare, free));
        Self::new(bits)
    }

    pub fn bits(&self) -> &[PatternBit] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn dont_cares(&self) -> usize {
        self.bits.iter().filter(|b| **b == PatternBit::DontCare).count()
    }

    /// Number of accepted values, `2^(#d)`.
    pub fn solution_count(&self) -> u64 {
        1u64 << self.dont_cares()
    }

    /// Whether the `len()`-bit value `index` matches.
    pub fn matches(&self, index: u64) -> bool {
        let n = self.bits.len();
        self.bits
            .iter()
            .enumerate()
            .all(|(i, b)| b.matches((index >> (n - 1 - i)) & 1 == 1))
    }

    /// Appends positions, e.g. a don't-care for the oracle qubit.
    pub fn extended(&self, tail: &[PatternBit]) -> Self {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(tail);
        Self { bits }
    }
}

impl FromStr for OraclePattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|ch| match ch {
                '0' => Ok(PatternBit::Zero),
                '1' => Ok(PatternBit::One),
                'd' | 'D' => Ok(PatternBit::DontCare),
                _ => Err(Error::InvalidPattern(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        if bits.is_empty() {
            return Err(Error::InvalidPattern(s.to_string()));
        }
        Ok(Self { bits })
    }
}

impl fmt::Display for OraclePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            let ch = match b {
                PatternBit::Zero => '0',
                PatternBit::One => '1',
                PatternBit::DontCare => 'd',
            };
            write!(f, "{ch}")?;
        }
        Ok(())
    }
}

/// Gate kinds the library can build, used for reporting and random circuits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateSpec {
    Hadamard,
    PauliX,
    Identity,
    ConditionalPhaseShift,
    Oracle(OraclePattern),
}

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

impl Manager {
    /// 2x2 block on qubit `q`: `[[e00, e01], [e10, e11]]` with the given
    /// sub-diagrams as entries.
    fn block2(&mut self, q: u32, e00: Id, e01: Id, e10: Id, e11: Id) -> Id {
        let c = Variable::column(q).level();
        let r = Variable::row(q).level();
        let row0 = self.mk(c, e01, e00);
        let row1 = self.mk(c, e11, e10);
        self.mk(r, row1, row0)
    }

    fn one_qubit(&mut self, entries: [f64; 4]) -> Result<QuiddMatrix> {
        let mut ids = [0; 4];
        for (id, v) in ids.iter_mut().zip(entries) {
            *id = self.terminal_raw(Complex64::new(v, 0.0))?;
        }
        let root = self.block2(0, ids[0], ids[1], ids[2], ids[3]);
        Ok(self.matrix_from_raw(root, 1))
    }

    pub fn hadamard(&mut self) -> Result<QuiddMatrix> {
        self.one_qubit([FRAC_1_SQRT_2, FRAC_1_SQRT_2, FRAC_1_SQRT_2, -FRAC_1_SQRT_2])
    }

    pub fn pauli_x(&mut self) -> Result<QuiddMatrix> {
        self.one_qubit([0.0, 1.0, 1.0, 0.0])
    }

    pub fn identity(&mut self, qubits: u32) -> Result<QuiddMatrix> {
        if qubits == 0 {
            return Err(Error::Usage("identity needs at least one qubit".into()));
        }
        let id1 = self.one_qubit([1.0, 0.0, 0.0, 1.0])?;
        self.tensor_power(&id1, qubits)
    }

    /// `H^{⊗n}`.
    pub fn hadamard_n(&mut self, qubits: u32) -> Result<QuiddMatrix> {
        if qubits == 0 {
            return Err(Error::Usage("hadamard_n needs at least one qubit".into()));
        }
        let h = self.hadamard()?;
        self.tensor_power(&h, qubits)
    }

    fn tensor_power(&mut self, m: &QuiddMatrix, times: u32) -> Result<QuiddMatrix> {
        let mut acc = *m;
        for _ in 1..times {
            acc = self.tensor(&acc, m)?;
        }
        Ok(acc)
    }

    /// Single-qubit `gate` acting on `target` of an `n`-qubit register.
    pub fn lift(&mut self, gate: &QuiddMatrix, target: u32, qubits: u32) -> Result<QuiddMatrix> {
        if gate.qubits() != 1 || target >= qubits {
            return Err(Error::Usage(format!(
                "cannot place a {}-qubit gate on qubit {target} of {qubits}",
                gate.qubits()
            )));
        }
        let mut acc = if target > 0 {
            let before = self.identity(target)?;
            self.tensor(&before, gate)?
        } else {
            *gate
        };
        if target + 1 < qubits {
            let after = self.identity(qubits - target - 1)?;
            acc = self.tensor(&acc, &after)?;
        }
        Ok(acc)
    }

    /// Controlled NOT on an `n`-qubit register, built as
    /// `|0><0|_c ⊗ I + |1><1|_c ⊗ X_t`.
    pub fn cnot(&mut self, control: u32, target: u32, qubits: u32) -> Result<QuiddMatrix> {
        if control == target || control >= qubits || target >= qubits {
            return Err(Error::Usage(format!(
                "invalid CNOT control {control} target {target} on {qubits} qubits"
            )));
        }
        let p0 = self.one_qubit([1.0, 0.0, 0.0, 0.0])?;
        let p1 = self.one_qubit([0.0, 0.0, 0.0, 1.0])?;
        let x = self.pauli_x()?;
        let passive = self.lift(&p0, control, qubits)?;
        let active_c = self.lift(&p1, control, qubits)?;
        let active_t = self.lift(&x, target, qubits)?;
        let active = self.matrix_matrix_multiply(&active_c, &active_t)?;
        self.add(&passive, &active)
    }

    /// Multi-controlled NOT over `k` data qubits plus one oracle qubit (the
    /// last, least significant one). Flips the oracle qubit iff the data bits
    /// match `pattern`.
    pub fn oracle_matrix(&mut self, pattern: &OraclePattern) -> Result<QuiddMatrix> {
        let k = pattern.len() as u32;
        let qubits = k + 1;
        if qubits > self.config().max_qubits {
            return Err(Error::Usage(format!("oracle needs {qubits} qubits")));
        }
        let zero = self.zero_id();
        let one = self.one_id();
        // matched: every data bit so far agrees with the pattern
        // unmatched: diagonal identity continuation
        let mut matched = self.block2(k, zero, one, one, zero);
        let mut unmatched = self.block2(k, one, zero, zero, one);
        for q in (0..k).rev() {
            let (on_zero, on_one) = match pattern.bits()[q as usize] {
                PatternBit::Zero => (matched, unmatched),
                PatternBit::One => (unmatched, matched),
                PatternBit::DontCare => (matched, matched),
            };
            let next_matched = self.block2(q, on_zero, zero, zero, on_one);
            unmatched = self.block2(q, unmatched, zero, zero, unmatched);
            matched = next_matched;
        }
        Ok(self.matrix_from_raw(matched, qubits))
    }

    /// `diag(1, -1, ..., -1)` over `k` qubits, in matrix form and as its
    /// diagonal vector.
    pub fn conditional_phase_shift(&mut self, k: u32) -> Result<(QuiddMatrix, QuiddVector)> {
        if k == 0 {
            return Err(Error::Usage("conditional phase shift needs at least one qubit".into()));
        }
        let zero = self.zero_id();
        let minus = self.terminal_raw(Complex64::new(-1.0, 0.0))?;
        let mut vec_node = self.one_id();
        let mut at_zero = self.one_id();
        let mut nonzero = minus;
        for q in (0..k).rev() {
            let c = Variable::column(q).level();
            vec_node = self.mk(c, minus, vec_node);
            let next_at_zero = self.block2(q, at_zero, zero, zero, nonzero);
            nonzero = self.block2(q, nonzero, zero, zero, nonzero);
            at_zero = next_at_zero;
        }
        Ok((self.matrix_from_raw(at_zero, k), self.vector_from_raw(vec_node, k)))
    }

    /// Conjugate transpose through dense form. Test helper for small sizes.
    pub fn conjugate_transpose_dense(&mut self, m: &QuiddMatrix) -> Result<QuiddMatrix> {
        let dim = m.dimension();
        let d = self.matrix_to_dense(m)?;
        let mut t = vec![Complex64::new(0.0, 0.0); dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                t[c * dim + r] = d[r * dim + c].conj();
            }
        }
        self.matrix_from_dense(dim, &t)
    }

    /// Builds any [`GateSpec`] on the given number of qubits. Oracles use the
    /// pattern length plus one and ignore `qubits`.
    pub fn gate(&mut self, spec: &GateSpec, qubits: u32) -> Result<QuiddMatrix> {
        match spec {
            GateSpec::Hadamard => self.hadamard_n(qubits),
            GateSpec::PauliX => {
                let x = self.pauli_x()?;
                self.tensor_power(&x, qubits)
            }
            GateSpec::Identity => self.identity(qubits),
            GateSpec::ConditionalPhaseShift => Ok(self.conditional_phase_shift(qubits)?.0),
            GateSpec::Oracle(p) => self.oracle_matrix(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn pattern_parsing() {
        let p: OraclePattern = "111d0d".parse().unwrap();
        assert_eq!(p.len(), 6);
        assert_eq!(p.solution_count(), 4);
        assert_eq!(p.to_string(), "111d0d");
        assert!("".parse::<OraclePattern>().is_err());
        assert!("10x".parse::<OraclePattern>().is_err());
        assert!(OraclePattern::new(vec![]).is_err());
    }

    #[test]
    fn pattern_matching() {
        let p: OraclePattern = "1d0".parse().unwrap();
        let hits: Vec<u64> = (0..8).filter(|&i| p.matches(i)).collect();
        assert_eq!(hits, vec![0b100, 0b110]);
    }

    #[test]
    fn relaxing_a_control_doubles_solutions() {
        for k in 1..8 {
            for free in 0..k {
                let tight = OraclePattern::ones_then_dont_cares(k, free).unwrap();
                let loose = OraclePattern::ones_then_dont_cares(k, free + 1).unwrap();
                assert_eq!(loose.solution_count(), 2 * tight.solution_count());
            }
        }
    }

    #[test]
    fn hadamard_entries_and_size() {
        let mut m = Manager::default();
        let h = m.hadamard().unwrap();
        let s = FRAC_1_SQRT_2;
        assert_eq!(m.matrix_to_dense(&h).unwrap(), vec![c(s), c(s), c(s), c(-s)]);
        assert_eq!(m.node_count(h.root()), 4);
    }

    #[test]
    fn hadamard_square_matches_printed_matrix() {
        let mut m = Manager::default();
        let h2 = m.hadamard_n(2).unwrap();
        let d = m.matrix_to_dense(&h2).unwrap();
        #[rustfmt::skip]
        let expected = [
            0.5, 0.5, 0.5, 0.5,
            0.5, -0.5, 0.5, -0.5,
            0.5, 0.5, -0.5, -0.5,
            0.5, -0.5, -0.5, 0.5,
        ];
        for (x, e) in d.iter().zip(expected) {
            assert!((x - c(e)).norm() < 1e-15);
        }
        let support: Vec<_> = m.support(h2.root()).into_iter().collect();
        assert_eq!(
            support,
            vec![Variable::row(0), Variable::column(0), Variable::row(1), Variable::column(1)]
        );
    }

    #[test]
    fn hadamard_n_grows_four_per_qubit() {
        let mut m = Manager::default();
        for n in 1..12 {
            let h = m.hadamard_n(n).unwrap();
            assert_eq!(m.node_count(h.root()), 4 * n as usize);
        }
        assert!(m.hadamard_n(0).is_err());
    }

    #[test]
    fn pauli_x_swaps_amplitudes() {
        let mut m = Manager::default();
        let x = m.pauli_x().unwrap();
        let v = m.vector_from_dense(&[c(0.6), Complex64::new(0.0, 0.8)]).unwrap();
        let r = m.matrix_vector_multiply(&x, &v).unwrap();
        assert_eq!(m.vector_to_dense(&r).unwrap(), vec![Complex64::new(0.0, 0.8), c(0.6)]);
    }

    #[test]
    fn identity_then_x_on_second_qubit() {
        let mut m = Manager::default();
        let i1 = m.identity(1).unwrap();
        let x = m.pauli_x().unwrap();
        let op = m.tensor(&i1, &x).unwrap();
        let s = m.basis_vector(0b00, 2).unwrap();
        let r = m.matrix_vector_multiply(&op, &s).unwrap();
        assert_eq!(r, m.basis_vector(0b01, 2).unwrap());
    }

    #[test]
    fn single_control_oracle_is_cnot() {
        let mut m = Manager::default();
        let o = m.oracle_matrix(&"1".parse().unwrap()).unwrap();
        let cnot = m.cnot(0, 1, 2).unwrap();
        assert_eq!(o, cnot);
        let d = m.matrix_to_dense(&o).unwrap();
        // |10> <-> |11>, |00> and |01> fixed
        let perm = [0, 1, 3, 2];
        for (r, &pc) in perm.iter().enumerate() {
            for col in 0..4 {
                assert_eq!(d[r * 4 + col], if col == pc { c(1.0) } else { c(0.0) });
            }
        }
    }

    #[test]
    fn all_dont_care_oracle_is_x_on_oracle_qubit() {
        let mut m = Manager::default();
        for k in 1..6 {
            let o = m.oracle_matrix(&OraclePattern::all_dont_care(k).unwrap()).unwrap();
            let id = m.identity(k as u32).unwrap();
            let x = m.pauli_x().unwrap();
            assert_eq!(o, m.tensor(&id, &x).unwrap());
        }
    }

    #[test]
    fn oracle_is_self_inverse() {
        let mut m = Manager::default();
        for p in ["1", "0", "d", "10", "1d1", "0d10", "dd01d"] {
            let o = m.oracle_matrix(&p.parse().unwrap()).unwrap();
            let sq = m.matrix_matrix_multiply(&o, &o).unwrap();
            let id = m.identity(o.qubits()).unwrap();
            assert_eq!(sq, id, "pattern {p}");
        }
    }

    #[test]
    fn all_ones_oracle_size() {
        let mut m = Manager::default();
        // 19 data qubits + oracle qubit = 20-qubit circuit
        let o = m.oracle_matrix(&OraclePattern::all_ones(19).unwrap()).unwrap();
        assert_eq!(m.node_count(o.root()), 99);
    }

    #[test]
    fn cps_forms_agree() {
        let mut m = Manager::default();
        let (mat, diag) = m.conditional_phase_shift(2).unwrap();
        assert_eq!(
            m.vector_to_dense(&diag).unwrap(),
            vec![c(1.0), c(-1.0), c(-1.0), c(-1.0)]
        );
        let d = m.matrix_to_dense(&mat).unwrap();
        for r in 0..4 {
            for col in 0..4 {
                let e = if r != col {
                    0.0
                } else if r == 0 {
                    1.0
                } else {
                    -1.0
                };
                assert_eq!(d[r * 4 + col], c(e));
            }
        }
        let sq = m.matrix_matrix_multiply(&mat, &mat).unwrap();
        assert_eq!(sq, m.identity(2).unwrap());
        assert!(m.conditional_phase_shift(0).is_err());
    }

    #[test]
    fn cps_vector_size_is_linear() {
        let mut m = Manager::default();
        for k in 1..30 {
            let (_, v) = m.conditional_phase_shift(k).unwrap();
            assert_eq!(m.node_count(v.root()), k as usize + 2);
        }
    }

    #[test]
    fn lift_and_cnot_validate_arguments() {
        let mut m = Manager::default();
        let h = m.hadamard().unwrap();
        assert!(m.lift(&h, 3, 3).is_err());
        let h2 = m.hadamard_n(2).unwrap();
        assert!(m.lift(&h2, 0, 3).is_err());
        assert!(m.cnot(1, 1, 3).is_err());
        assert!(m.cnot(0, 3, 3).is_err());
    }

    #[test]
    fn gate_specs_build() {
        let mut m = Manager::default();
        let specs = [
            GateSpec::Hadamard,
            GateSpec::PauliX,
            GateSpec::Identity,
            GateSpec::ConditionalPhaseShift,
        ];
        for s in &specs {
            assert_eq!(m.gate(s, 3).unwrap().qubits(), 3);
        }
        let o = m.gate(&GateSpec::Oracle("1d".parse().unwrap()), 0).unwrap();
        assert_eq!(o.qubits(), 3);
    }
}
