//! Compressed vectors and matrices, and the linear algebra that runs on them
//! without expanding to dense form.
//!
//! A vector over `n` qubits depends only on `C0..C(n-1)`; a matrix depends on
//! the interleaved `R0, C0, ..., R(n-1), C(n-1)`. Index bit `i` (most
//! significant first) is the variable for qubit `i`.

use std::collections::HashMap;

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::dd::{BinaryOp, Id, Manager, NodeRef, VarKind, Variable, TERMINAL_LEVEL};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuiddVector {
    root: NodeRef,
    qubits: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuiddMatrix {
    root: NodeRef,
    qubits: u32,
}

/// Shared surface of vectors and matrices. The `qubits` attribute counts
/// qubits, not the dimension `2^qubits`.
pub trait Quidd: Copy {
    fn root(&self) -> NodeRef;
    fn qubits(&self) -> u32;
    #[doc(hidden)]
    fn from_parts(root: NodeRef, qubits: u32) -> Self;
}

impl Quidd for QuiddVector {
    fn root(&self) -> NodeRef {
        self.root
    }
    fn qubits(&self) -> u32 {
        self.qubits
    }
    fn from_parts(root: NodeRef, qubits: u32) -> Self {
        Self { root, qubits }
    }
}

impl Quidd for QuiddMatrix {
    fn root(&self) -> NodeRef {
        self.root
    }
    fn qubits(&self) -> u32 {
        self.qubits
    }
    fn from_parts(root: NodeRef, qubits: u32) -> Self {
        Self { root, qubits }
    }
}

impl QuiddVector {
    pub fn root(&self) -> NodeRef {
        self.root
    }
    pub fn qubits(&self) -> u32 {
        self.qubits
    }
    pub fn dimension(&self) -> usize {
        1usize << self.qubits
    }
}

impl QuiddMatrix {
    pub fn root(&self) -> NodeRef {
        self.root
    }
    pub fn qubits(&self) -> u32 {
        self.qubits
    }
    pub fn dimension(&self) -> usize {
        1usize << self.qubits
    }
}

fn log2_exact(len: usize) -> Result<u32> {
    if len.is_power_of_two() {
        Ok(len.trailing_zeros())
    } else {
        Err(Error::NotPowerOfTwo(len))
    }
}

fn same_size(left: u32, right: u32) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

impl Manager {
    fn check_qubits(&self, qubits: u32) -> Result<()> {
        let max = self.config().max_qubits;
        if qubits <= max {
            Ok(())
        } else {
            Err(Error::VariableOutOfRange {
                var: Variable::row(qubits - 1),
                max_qubits: max,
            })
        }
    }

    fn check_dense_limit(&self, qubits: u32) -> Result<()> {
        let limit = self.config().dense_limit;
        if qubits <= limit {
            Ok(())
        } else {
            Err(Error::DenseLimit { qubits, limit })
        }
    }

    pub(crate) fn vector_from_raw(&self, root: Id, qubits: u32) -> QuiddVector {
        QuiddVector {
            root: self.wrap(root),
            qubits,
        }
    }

    pub(crate) fn matrix_from_raw(&self, root: Id, qubits: u32) -> QuiddMatrix {
        QuiddMatrix {
            root: self.wrap(root),
            qubits,
        }
    }

    /// A constant vector: every one of the `2^qubits` entries equals `value`.
    pub fn constant_vector(&mut self, value: Complex64, qubits: u32) -> Result<QuiddVector> {
        self.check_qubits(qubits)?;
        let t = self.terminal_raw(value)?;
        Ok(self.vector_from_raw(t, qubits))
    }

    /// The computational basis vector `|index>`.
    pub fn basis_vector(&mut self, index: u64, qubits: u32) -> Result<QuiddVector> {
        self.check_qubits(qubits)?;
        if qubits < 64 && index >> qubits != 0 {
            return Err(Error::Usage(format!(
                "basis index {index} out of range for {qubits} qubits"
            )));
        }
        let mut node = self.one_id();
        let zero = self.zero_id();
        for q in (0..qubits).rev() {
            let bit = (index >> (qubits - 1 - q)) & 1 == 1;
            let level = Variable::column(q).level();
            node = if bit {
                self.mk(level, node, zero)
            } else {
                self.mk(level, zero, node)
            };
        }
        Ok(self.vector_from_raw(node, qubits))
    }

    pub fn vector_from_dense(&mut self, values: &[Complex64]) -> Result<QuiddVector> {
        let qubits = log2_exact(values.len())?;
        self.check_qubits(qubits)?;
        let root = self.build_vector(values, 0)?;
        Ok(self.vector_from_raw(root, qubits))
    }

    fn build_vector(&mut self, values: &[Complex64], qubit: u32) -> Result<Id> {
        if values.len() == 1 {
            return self.terminal_raw(values[0]);
        }
        let (lo, hi) = values.split_at(values.len() / 2);
        let lo = self.build_vector(lo, qubit + 1)?;
        let hi = self.build_vector(hi, qubit + 1)?;
        Ok(self.mk(Variable::column(qubit).level(), hi, lo))
    }

    pub fn vector_to_dense(&self, v: &QuiddVector) -> Result<Vec<Complex64>> {
        let root = self.raw(v.root)?;
        self.check_dense_limit(v.qubits)?;
        let mut out = vec![Complex64::new(0.0, 0.0); v.dimension()];
        self.fill_vector(root, 0, v.qubits, &mut out);
        Ok(out)
    }

    fn fill_vector(&self, node: Id, qubit: u32, qubits: u32, out: &mut [Complex64]) {
        if qubit == qubits {
            debug_assert!(self.is_leaf(node));
            out[0] = self.leaf_value(node);
            return;
        }
        let (hi, lo) = self.cofactors(node, Variable::column(qubit).level());
        let (out_lo, out_hi) = out.split_at_mut(out.len() / 2);
        self.fill_vector(lo, qubit + 1, qubits, out_lo);
        self.fill_vector(hi, qubit + 1, qubits, out_hi);
    }

    /// Builds a matrix from `dim * dim` row-major entries.
    pub fn matrix_from_dense(&mut self, dim: usize, entries: &[Complex64]) -> Result<QuiddMatrix> {
        let qubits = log2_exact(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::Usage(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        self.check_qubits(qubits)?;
        let root = self.build_matrix(entries, dim, 0, 0, dim, 0)?;
        Ok(self.matrix_from_raw(root, qubits))
    }

    fn build_matrix(
        &mut self,
        entries: &[Complex64],
        dim: usize,
        row: usize,
        col: usize,
        size: usize,
        qubit: u32,
    ) -> Result<Id> {
        if size == 1 {
            return self.terminal_raw(entries[row * dim + col]);
        }
        let half = size / 2;
        let block = |m: &mut Self, r: usize, c: usize| m.build_matrix(entries, dim, r, c, half, qubit + 1);
        let b00 = block(self, row, col)?;
        let b01 = block(self, row, col + half)?;
        let b10 = block(self, row + half, col)?;
        let b11 = block(self, row + half, col + half)?;
        let c_level = Variable::column(qubit).level();
        let r_level = Variable::row(qubit).level();
        let row0 = self.mk(c_level, b01, b00);
        let row1 = self.mk(c_level, b11, b10);
        Ok(self.mk(r_level, row1, row0))
    }

    /// Row-major dense entries.
    pub fn matrix_to_dense(&self, m: &QuiddMatrix) -> Result<Vec<Complex64>> {
        let root = self.raw(m.root)?;
        self.check_dense_limit(m.qubits)?;
        let dim = m.dimension();
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        self.fill_matrix(root, 0, m.qubits, 0, 0, dim, dim, &mut out);
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn fill_matrix(
        &self,
        node: Id,
        qubit: u32,
        qubits: u32,
        row: usize,
        col: usize,
        size: usize,
        dim: usize,
        out: &mut [Complex64],
    ) {
        if qubit == qubits {
            out[row * dim + col] = self.leaf_value(node);
            return;
        }
        let half = size / 2;
        let (r1, r0) = self.cofactors(node, Variable::row(qubit).level());
        for (r_node, r_off) in [(r0, 0), (r1, half)] {
            let (c1, c0) = self.cofactors(r_node, Variable::column(qubit).level());
            for (c_node, c_off) in [(c0, 0), (c1, half)] {
                self.fill_matrix(c_node, qubit + 1, qubits, row + r_off, col + c_off, half, dim, out);
            }
        }
    }

    /// Evaluates one amplitude by walking a single path.
    pub fn vector_entry(&self, v: &QuiddVector, index: u64) -> Result<Complex64> {
        let mut node = self.raw(v.root)?;
        let n = v.qubits;
        while !self.is_leaf(node) {
            let var = Variable::from_level(self.level(node));
            let bit = (index >> (n - 1 - var.qubit)) & 1 == 1;
            node = if bit { self.hi(node) } else { self.lo(node) };
        }
        Ok(self.leaf_value(node))
    }

    /// Quasi-ring product `sum_z f * g` over the column variables of the first
    /// `qubits` qubits. Row and scratch variables stay free.
    ///
    /// Whenever recursion jumps over `i` summation variables that neither
    /// operand tests, the partial result is scaled by `2^i`.
    fn sum_product(&mut self, f: Id, g: Id, qubits: u32) -> Result<Id> {
        let mut memo = FxHashMap::default();
        let top = self.level(f).min(self.level(g));
        let r = self.sum_product_rec(f, g, qubits, &mut memo)?;
        self.scale_skipped(r, inner_between(None, top, qubits))
    }

    fn sum_product_rec(
        &mut self,
        f: Id,
        g: Id,
        qubits: u32,
        memo: &mut FxHashMap<(Id, Id), Id>,
    ) -> Result<Id> {
        let zero = self.zero_id();
        if f == zero || g == zero {
            return Ok(zero);
        }
        if self.is_leaf(f) && self.is_leaf(g) {
            return self.apply_raw(f, g, BinaryOp::Multiply);
        }
        if let Some(&r) = memo.get(&(f, g)) {
            return Ok(r);
        }
        let top = self.level(f).min(self.level(g));
        let (f1, f0) = self.cofactors(f, top);
        let (g1, g0) = self.cofactors(g, top);

        let hi = self.sum_product_rec(f1, g1, qubits, memo)?;
        let hi_top = self.level(f1).min(self.level(g1));
        let hi = self.scale_skipped(hi, inner_between(Some(top), hi_top, qubits))?;

        let lo = self.sum_product_rec(f0, g0, qubits, memo)?;
        let lo_top = self.level(f0).min(self.level(g0));
        let lo = self.scale_skipped(lo, inner_between(Some(top), lo_top, qubits))?;

        let r = if Variable::from_level(top).kind == VarKind::Column {
            self.apply_raw(hi, lo, BinaryOp::Add)?
        } else {
            self.mk(top, hi, lo)
        };
        memo.insert((f, g), r);
        Ok(r)
    }

    fn scale_skipped(&mut self, f: Id, skipped: u32) -> Result<Id> {
        if skipped == 0 {
            Ok(f)
        } else {
            self.scale_raw(f, Complex64::new((skipped as f64).exp2(), 0.0))
        }
    }

    pub fn matrix_vector_multiply(&mut self, m: &QuiddMatrix, v: &QuiddVector) -> Result<QuiddVector> {
        same_size(m.qubits, v.qubits)?;
        let a = self.raw(m.root)?;
        let b = self.raw(v.root)?;
        let product = self.sum_product(a, b, m.qubits)?;
        // the product depends on row variables; move them onto columns
        let root = self.remap_raw(product, &|l| Variable::column(Variable::from_level(l).qubit).level());
        Ok(self.vector_from_raw(root, v.qubits))
    }

    pub fn matrix_matrix_multiply(&mut self, a: &QuiddMatrix, b: &QuiddMatrix) -> Result<QuiddMatrix> {
        same_size(a.qubits, b.qubits)?;
        let fa = self.raw(a.root)?;
        let fb = self.raw(b.root)?;
        // B's rows become the summation variables (A's columns), B's columns
        // move to the scratch slots.
        let fb = self.remap_raw(fb, &|l| {
            let v = Variable::from_level(l);
            match v.kind {
                VarKind::Row => Variable::column(v.qubit).level(),
                _ => Variable::scratch(v.qubit).level(),
            }
        });
        let product = self.sum_product(fa, fb, a.qubits)?;
        let root = self.remap_raw(product, &|l| {
            let v = Variable::from_level(l);
            match v.kind {
                VarKind::Scratch => Variable::column(v.qubit).level(),
                _ => l,
            }
        });
        Ok(self.matrix_from_raw(root, a.qubits))
    }

    /// Kronecker product `a ⊗ b`: `b`'s variables move below all of `a`'s, then
    /// the terminals are multiplied.
    pub fn tensor<Q: Quidd>(&mut self, a: &Q, b: &Q) -> Result<Q> {
        let fa = self.raw(a.root())?;
        let fb = self.raw(b.root())?;
        let qubits = a.qubits() + b.qubits();
        self.check_qubits(qubits)?;
        let shift = 3 * a.qubits();
        let fb = if shift == 0 {
            fb
        } else {
            self.remap_raw(fb, &|l| l + shift)
        };
        let root = self.apply_raw(fa, fb, BinaryOp::Multiply)?;
        Ok(Q::from_parts(self.wrap(root), qubits))
    }

    pub fn add<Q: Quidd>(&mut self, a: &Q, b: &Q) -> Result<Q> {
        self.pointwise(a, b, BinaryOp::Add)
    }

    /// Entrywise product ("terminal multiplication").
    pub fn elementwise_multiply<Q: Quidd>(&mut self, a: &Q, b: &Q) -> Result<Q> {
        self.pointwise(a, b, BinaryOp::Multiply)
    }

    fn pointwise<Q: Quidd>(&mut self, a: &Q, b: &Q, op: BinaryOp) -> Result<Q> {
        same_size(a.qubits(), b.qubits())?;
        let fa = self.raw(a.root())?;
        let fb = self.raw(b.root())?;
        let root = self.apply_raw(fa, fb, op)?;
        Ok(Q::from_parts(self.wrap(root), a.qubits()))
    }

    pub fn scalar_multiply<Q: Quidd>(&mut self, c: Complex64, a: &Q) -> Result<Q> {
        let fa = self.raw(a.root())?;
        let root = self.scale_raw(fa, c)?;
        Ok(Q::from_parts(self.wrap(root), a.qubits()))
    }

    /// Relabels qubit indices of any DD through an order-preserving map.
    pub fn shift_qubits(&mut self, f: NodeRef, offset: u32) -> Result<NodeRef> {
        let map: HashMap<Variable, Variable> = self
            .support(f)
            .into_iter()
            .map(|v| {
                (
                    v,
                    Variable {
                        kind: v.kind,
                        qubit: v.qubit + offset,
                    },
                )
            })
            .collect();
        self.remap_variables(f, &map)
    }
}

/// Number of summation (column) variables with level strictly between `lo`
/// and `hi`, restricted to the first `qubits` qubits.
fn inner_between(lo: Option<u32>, hi: u32, qubits: u32) -> u32 {
    let end = if hi == TERMINAL_LEVEL {
        qubits
    } else {
        // column of qubit q sits at 3q + 1; count q with 3q + 1 < hi
        hi.saturating_sub(1).div_ceil(3).min(qubits)
    };
    let start = match lo {
        None => 0,
        // count q with 3q + 1 > lo
        Some(lo) => (lo / 3 + u32::from(lo % 3 >= 1)).min(end),
    };
    end - start
}
