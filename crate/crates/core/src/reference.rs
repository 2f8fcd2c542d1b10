//! Brute-force dense linear algebra, the ground truth for the compressed
//! engine.
//!
//! Matrices are built by index arithmetic and never converted from decision
//! diagrams. Only pattern parsing is shared with the code under test.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gates::OraclePattern;

/// Largest register the dense routines accept.
pub const MAX_DENSE_QUBITS: u32 = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

pub type DenseVector = Vec<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn from_fn(qubits: u32, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        guard(qubits)?;
        let dim = 1usize << qubits;
        let mut data = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                data.push(f(r, c));
            }
        }
        Ok(Self { dim, data })
    }

    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if !dim.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(dim));
        }
        if data.len() != dim * dim {
            return Err(Error::Usage(format!("{} entries for dimension {dim}", data.len())));
        }
        guard(dim.trailing_zeros())?;
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qubits(&self) -> u32 {
        self.dim.trailing_zeros()
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn conjugate_transpose(&self) -> Self {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for r in 0..n {
            for c in 0..n {
                data[c * n + r] = self.data[r * n + c].conj();
            }
        }
        Self { dim: n, data }
    }
}

fn guard(qubits: u32) -> Result<()> {
    if qubits <= MAX_DENSE_QUBITS {
        Ok(())
    } else {
        Err(Error::DenseLimit {
            qubits,
            limit: MAX_DENSE_QUBITS,
        })
    }
}

fn same_len(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: a.trailing_zeros(),
            right: b.trailing_zeros(),
        })
    }
}

pub fn dense_matvec(m: &DenseMatrix, v: &[Complex64]) -> Result<DenseVector> {
    same_len(m.dim, v.len())?;
    Ok((0..m.dim)
        .map(|r| {
            let row = &m.data[r * m.dim..(r + 1) * m.dim];
            row.iter().zip(v).map(|(a, b)| a * b).sum()
        })
        .collect())
}

pub fn dense_matmul(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    same_len(a.dim, b.dim)?;
    let n = a.dim;
    let mut data = vec![ZERO; n * n];
    for r in 0..n {
        for k in 0..n {
            let x = a.data[r * n + k];
            if x == ZERO {
                continue;
            }
            for c in 0..n {
                data[r * n + c] += x * b.data[k * n + c];
            }
        }
    }
    Ok(DenseMatrix { dim: n, data })
}

pub fn dense_kron(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    guard(a.qubits() + b.qubits())?;
    let n = a.dim * b.dim;
    let mut data = vec![ZERO; n * n];
    for ar in 0..a.dim {
        for ac in 0..a.dim {
            let x = a.get(ar, ac);
            for br in 0..b.dim {
                for bc in 0..b.dim {
                    data[(ar * b.dim + br) * n + ac * b.dim + bc] = x * b.get(br, bc);
                }
            }
        }
    }
    Ok(DenseMatrix { dim: n, data })
}

pub fn dense_kron_vec(a: &[Complex64], b: &[Complex64]) -> DenseVector {
    a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect()
}

pub fn dense_add(a: &[Complex64], b: &[Complex64]) -> Result<DenseVector> {
    same_len(a.len(), b.len())?;
    Ok(a.iter().zip(b).map(|(x, y)| x + y).collect())
}

pub fn dense_hadamard_product(a: &[Complex64], b: &[Complex64]) -> Result<DenseVector> {
    same_len(a.len(), b.len())?;
    Ok(a.iter().zip(b).map(|(x, y)| x * y).collect())
}

pub fn dense_norm_squared(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

fn hadamard_entry(qubits: u32, r: usize, c: usize) -> Complex64 {
    let sign = if (r & c).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Complex64::new(sign * (-(qubits as f64) / 2.0).exp2(), 0.0)
}

/// `H^{⊗n}` from `2^{-n/2} (-1)^{popcount(r & c)}`.
pub fn dense_hadamard(qubits: u32) -> Result<DenseMatrix> {
    DenseMatrix::from_fn(qubits, |r, c| hadamard_entry(qubits, r, c))
}

pub fn dense_identity(qubits: u32) -> Result<DenseMatrix> {
    DenseMatrix::from_fn(qubits, |r, c| if r == c { ONE } else { ZERO })
}

pub fn dense_pauli_x() -> DenseMatrix {
    DenseMatrix {
        dim: 2,
        data: vec![ZERO, ONE, ONE, ZERO],
    }
}

/// Single-qubit matrix on `target` (0 = most significant) of an `n`-qubit
/// register.
pub fn dense_lift(gate: &DenseMatrix, target: u32, qubits: u32) -> Result<DenseMatrix> {
    if gate.dim != 2 || target >= qubits {
        return Err(Error::Usage(format!("bad target {target} for {qubits} qubits")));
    }
    let shift = qubits - 1 - target;
    let others = !(1usize << shift);
    DenseMatrix::from_fn(qubits, |r, c| {
        if r & others != c & others {
            ZERO
        } else {
            gate.get((r >> shift) & 1, (c >> shift) & 1)
        }
    })
}

pub fn dense_cnot(control: u32, target: u32, qubits: u32) -> Result<DenseMatrix> {
    if control == target || control >= qubits || target >= qubits {
        return Err(Error::Usage(format!("bad CNOT {control}->{target}")));
    }
    let cbit = 1usize << (qubits - 1 - control);
    let tbit = 1usize << (qubits - 1 - target);
    DenseMatrix::from_fn(qubits, |r, c| {
        let image = if c & cbit != 0 { c ^ tbit } else { c };
        if r == image {
            ONE
        } else {
            ZERO
        }
    })
}

/// Oracle over `k` data qubits and one trailing oracle qubit.
pub fn dense_oracle(pattern: &OraclePattern) -> Result<DenseMatrix> {
    let qubits = pattern.len() as u32 + 1;
    DenseMatrix::from_fn(qubits, |r, c| {
        let data = c >> 1;
        let image = if pattern.matches(data as u64) { c ^ 1 } else { c };
        if r == image {
            ONE
        } else {
            ZERO
        }
    })
}

/// Diagonal of the conditional phase shift: `+1` at index 0, `-1` elsewhere.
pub fn dense_cps_diagonal(k: u32) -> Result<DenseVector> {
    guard(k)?;
    Ok((0..1usize << k)
        .map(|i| if i == 0 { ONE } else { -ONE })
        .collect())
}

/// Reference trajectory of Grover's algorithm.
#[derive(Debug, Clone)]
pub struct DenseGroverTrace {
    /// State after initialization (index 0) and after each iteration.
    pub states: Vec<DenseVector>,
    /// Probability of measuring a data value that matches the pattern.
    pub probabilities: Vec<f64>,
}

/// Dense `O(4^n)` matrix-vector product with entries produced on demand.
fn apply_entrywise(qubits: u32, entry: impl Fn(usize, usize) -> Complex64, v: &[Complex64]) -> DenseVector {
    let dim = 1usize << qubits;
    (0..dim)
        .map(|r| (0..dim).map(|c| entry(r, c) * v[c]).sum())
        .collect()
}

/// Runs Grover's algorithm on explicit state vectors. Oracle qubit prepared
/// in `|->`, then per iteration: oracle, `H^{⊗k} ⊗ I`, phase shift on the
/// data register, `H^{⊗k} ⊗ I`.
pub fn dense_grover(pattern: &OraclePattern, iterations: u64) -> Result<DenseGroverTrace> {
    let k = pattern.len() as u32;
    if k > MAX_DENSE_QUBITS - 1 {
        return Err(Error::DenseLimit {
            qubits: k + 1,
            limit: MAX_DENSE_QUBITS,
        });
    }
    let n = k + 1;
    let dim = 1usize << n;
    let mut state = vec![ZERO; dim];
    state[1] = ONE; // |0...0>|1>
    state = apply_entrywise(n, |r, c| hadamard_entry(n, r, c), &state);

    let oracle = |r: usize, c: usize| {
        let image = if pattern.matches((c >> 1) as u64) { c ^ 1 } else { c };
        if r == image {
            ONE
        } else {
            ZERO
        }
    };
    let grover_h = |r: usize, c: usize| {
        if (r & 1) != (c & 1) {
            ZERO
        } else {
            hadamard_entry(k, r >> 1, c >> 1)
        }
    };
    let success = |s: &[Complex64]| -> f64 {
        s.iter()
            .enumerate()
            .filter(|(i, _)| pattern.matches((*i >> 1) as u64))
            .map(|(_, x)| x.norm_sqr())
            .sum()
    };

    let mut states = vec![state.clone()];
    let mut probabilities = vec![success(&state)];
    for _ in 0..iterations {
        state = apply_entrywise(n, oracle, &state);
        state = apply_entrywise(n, grover_h, &state);
        for (i, x) in state.iter_mut().enumerate() {
            if i >> 1 != 0 {
                *x = -*x;
            }
        }
        state = apply_entrywise(n, grover_h, &state);
        probabilities.push(success(&state));
        states.push(state.clone());
    }
    Ok(DenseGroverTrace { states, probabilities })
}

/// `sin^2((2j + 1) asin(sqrt(M/N)))`.
pub fn grover_closed_form(solutions: u64, space: u64, iteration: u64) -> f64 {
    let theta = ((solutions as f64) / (space as f64)).sqrt().asin();
    ((2 * iteration + 1) as f64 * theta).sin().powi(2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn kron_of_hadamards_matches_printed_matrix() {
        let h = dense_hadamard(1).unwrap();
        let hh = dense_kron(&h, &h).unwrap();
        #[rustfmt::skip]
        let printed = [
            0.5, 0.5, 0.5, 0.5,
            0.5, -0.5, 0.5, -0.5,
            0.5, 0.5, -0.5, -0.5,
            0.5, -0.5, -0.5, 0.5,
        ];
        let printed: Vec<_> = printed.iter().map(|&x| c(x)).collect();
        assert!(close(hh.as_slice(), &printed, 1e-15));
        assert!(close(hh.as_slice(), dense_hadamard(2).unwrap().as_slice(), 1e-15));
    }

    #[test]
    fn identity_matvec() {
        let v: Vec<_> = (0..8).map(|i| Complex64::new(i as f64, -1.0)).collect();
        assert_eq!(dense_matvec(&dense_identity(3).unwrap(), &v).unwrap(), v);
    }

    #[test]
    fn hadamard_squares_to_identity() {
        let h = dense_hadamard(1).unwrap();
        let hh = dense_matmul(&h, &h).unwrap();
        assert!(close(hh.as_slice(), dense_identity(1).unwrap().as_slice(), 1e-15));
    }

    #[test]
    fn cnot_matches_lifted_projectors() {
        let cx = dense_cnot(0, 2, 3).unwrap();
        for c0 in 0..8usize {
            let r = if c0 & 4 != 0 { c0 ^ 1 } else { c0 };
            assert_eq!(cx.get(r, c0), c(1.0));
        }
        let x = dense_lift(&dense_pauli_x(), 1, 3).unwrap();
        assert_eq!(x.get(0b010, 0b000), c(1.0));
    }

    #[test]
    fn guard_and_mismatch() {
        assert!(dense_hadamard(13).is_err());
        let a = dense_identity(1).unwrap();
        let b = dense_identity(2).unwrap();
        assert!(dense_matmul(&a, &b).is_err());
        assert!(dense_add(&[c(1.0)], &[c(1.0), c(2.0)]).is_err());
        assert!(dense_grover(&OraclePattern::all_ones(12).unwrap(), 1).is_err());
    }

    #[test]
    fn grover_initial_probability_is_uniform() {
        let p = OraclePattern::all_ones(4).unwrap();
        let t = dense_grover(&p, 0).unwrap();
        assert!((t.probabilities[0] - 1.0 / 16.0).abs() < 1e-15);
        for x in &t.states[0] {
            assert!((x.norm_sqr() - 1.0 / 32.0).abs() < 1e-15);
        }
    }

    #[test]
    fn grover_four_data_qubits() {
        let p = OraclePattern::all_ones(4).unwrap();
        let t = dense_grover(&p, 3).unwrap();
        let expected = grover_closed_form(1, 16, 3);
        assert!((t.probabilities[3] - expected).abs() < 1e-12);
        assert!((t.probabilities[3] - 0.961).abs() < 1e-3);
    }

    #[test]
    fn grover_matches_closed_form() {
        for (pattern, iters) in [("111", 4), ("1d11", 5), ("11dd0", 6), ("d1", 3), ("ddd", 2)] {
            let p: OraclePattern = pattern.parse().unwrap();
            let n_space = 1u64 << p.len();
            let t = dense_grover(&p, iters).unwrap();
            for (j, prob) in t.probabilities.iter().enumerate() {
                let cf = grover_closed_form(p.solution_count(), n_space, j as u64);
                assert!((prob - cf).abs() < 1e-9, "{pattern} j={j}: {prob} vs {cf}");
            }
            for s in &t.states {
                assert!((dense_norm_squared(s) - 1.0).abs() < 1e-12);
            }
        }
    }
}
