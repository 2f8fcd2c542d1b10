//! Born-rule probabilities and full-register measurement on compressed states.
//!
//! All routines walk the diagram once with memoization, so their cost follows
//! the node count rather than `2^n`. A variable missing on a path stands for a
//! whole half-space with the same amplitudes, which doubles the probability
//! mass of the subtree below it.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::algebra::QuiddVector;
use crate::dd::{Id, Manager, Variable};
use crate::error::{Error, Result};
use crate::gates::{OraclePattern, PatternBit};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementOutcome {
    pub basis_index: u64,
    pub probability: f64,
    pub collapsed_state: QuiddVector,
}

/// Tolerated deviation of the total probability before measuring.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

struct MassWalk<'a> {
    mgr: &'a Manager,
    qubits: u32,
    bits: Option<&'a [PatternBit]>,
    memo: FxHashMap<(Id, u32), f64>,
}

impl MassWalk<'_> {
    /// Probability mass of `node` over the index bits `qubit..qubits`,
    /// restricted to the pattern when one is given.
    fn mass(&mut self, node: Id, qubit: u32) -> f64 {
        if qubit == self.qubits {
            return self.mgr.leaf_value(node).norm_sqr();
        }
        if let Some(&m) = self.memo.get(&(node, qubit)) {
            return m;
        }
        let (hi, lo) = self.mgr.cofactors(node, Variable::column(qubit).level());
        let bit = self.bits.map_or(PatternBit::DontCare, |b| b[qubit as usize]);
        let m = match bit {
            PatternBit::Zero => self.mass(lo, qubit + 1),
            PatternBit::One => self.mass(hi, qubit + 1),
            PatternBit::DontCare if hi == lo => 2.0 * self.mass(hi, qubit + 1),
            PatternBit::DontCare => self.mass(lo, qubit + 1) + self.mass(hi, qubit + 1),
        };
        self.memo.insert((node, qubit), m);
        m
    }
}

impl Manager {
    fn mass_walk<'a>(&'a self, v: &QuiddVector, bits: Option<&'a [PatternBit]>) -> MassWalk<'a> {
        MassWalk {
            mgr: self,
            qubits: v.qubits(),
            bits,
            memo: FxHashMap::default(),
        }
    }

    /// `sum_i |c_i|^2`.
    pub fn norm_squared(&self, v: &QuiddVector) -> Result<f64> {
        let root = self.raw(v.root())?;
        Ok(self.mass_walk(v, None).mass(root, 0))
    }

    /// Total probability of the indices matching `pattern`.
    pub fn pattern_probability(&self, v: &QuiddVector, pattern: &OraclePattern) -> Result<f64> {
        if pattern.len() != v.qubits() as usize {
            return Err(Error::PatternLength {
                pattern: pattern.len(),
                qubits: v.qubits(),
            });
        }
        let root = self.raw(v.root())?;
        Ok(self.mass_walk(v, Some(pattern.bits())).mass(root, 0))
    }

    /// Samples a basis state with probability `|c_i|^2` by descending the
    /// diagram, choosing each branch in proportion to its mass.
    pub fn measure(&mut self, v: &QuiddVector, seed: u64) -> Result<MeasurementOutcome> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.measure_with(v, &mut rng)
    }

    pub fn measure_with<R: Rng + ?Sized>(&mut self, v: &QuiddVector, rng: &mut R) -> Result<MeasurementOutcome> {
        let root = self.raw(v.root())?;
        let n = v.qubits();
        let (index, amplitude) = {
            let mut walk = self.mass_walk(v, None);
            let total = walk.mass(root, 0);
            if (total - 1.0).abs() >= NORMALIZATION_TOLERANCE {
                return Err(Error::Unnormalized(total));
            }
            let mut node = root;
            let mut index = 0u64;
            for q in 0..n {
                let (hi, lo) = self.cofactors(node, Variable::column(q).level());
                let m1 = walk.mass(hi, q + 1);
                let m0 = walk.mass(lo, q + 1);
                let take_one = m0 + m1 > 0.0 && rng.gen::<f64>() * (m0 + m1) < m1;
                index = (index << 1) | u64::from(take_one);
                node = if take_one { hi } else { lo };
            }
            (index, self.leaf_value(node))
        };
        let collapsed_state = self.basis_vector(index, n)?;
        Ok(MeasurementOutcome {
            basis_index: index,
            probability: amplitude.norm_sqr(),
            collapsed_state,
        })
    }

    /// Probability of every basis index, through dense conversion. Test aid.
    pub fn probabilities_dense(&self, v: &QuiddVector) -> Result<Vec<f64>> {
        Ok(self
            .vector_to_dense(v)?
            .iter()
            .map(Complex64::norm_sqr)
            .collect())
    }
}
