//! Reduced, ordered, shared multi-terminal decision diagrams.
//!
//! A [`Manager`] owns every node: a unique table keeps the DAG canonical, an
//! apply cache memoizes pointwise combinations, and a [`TerminalTable`] holds
//! the complex leaf values. Handles ([`NodeRef`]) are plain integers tagged
//! with the id of the manager that issued them.
//!
//! Variables are ordered by interleaving row and column index bits:
//! `R0 < C0 < R1 < C1 < ...`. Qubit 0 is the most significant index bit. Each
//! qubit also owns a scratch slot directly after its column variable, used
//! only while multiplying two matrices to keep the second operand's column
//! index apart from the summation index.

use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write as _};
use std::sync::atomic::{AtomicU32, Ordering};

use num_complex::Complex64;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::error::{Error, Result};
use crate::terminal::{TerminalId, TerminalTable, ToleranceConfig};

pub(crate) type Id = u32;

pub(crate) const TERMINAL_LEVEL: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarKind {
    Row,
    Column,
    /// Auxiliary slot between `Ci` and `R(i+1)`; never appears in a finished
    /// vector or matrix.
    Scratch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Variable {
    pub kind: VarKind,
    pub qubit: u32,
}

impl Variable {
    pub const fn row(qubit: u32) -> Self {
        Self { kind: VarKind::Row, qubit }
    }

    pub const fn column(qubit: u32) -> Self {
        Self { kind: VarKind::Column, qubit }
    }

    pub const fn scratch(qubit: u32) -> Self {
        Self { kind: VarKind::Scratch, qubit }
    }

    /// Position in the global order.
    pub const fn level(self) -> u32 {
        let offset = match self.kind {
            VarKind::Row => 0,
            VarKind::Column => 1,
            VarKind::Scratch => 2,
        };
        3 * self.qubit + offset
    }

    pub(crate) const fn from_level(level: u32) -> Self {
        let kind = match level % 3 {
            0 => VarKind::Row,
            1 => VarKind::Column,
            _ => VarKind::Scratch,
        };
        Self { kind, qubit: level / 3 }
    }
}

impl PartialOrd for Variable {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Variable {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.level().cmp(&other.level())
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            VarKind::Row => 'R',
            VarKind::Column => 'C',
            VarKind::Scratch => 'S',
        };
        write!(f, "{c}{}", self.qubit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeRef {
    manager: u32,
    id: Id,
}

impl NodeRef {
    pub fn manager_id(self) -> u32 {
        self.manager
    }
}

/// Terminal operator for [`Manager::apply`]. Both are commutative and
/// multiplication distributes over addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinaryOp {
    Add,
    Multiply,
}

impl BinaryOp {
    pub fn eval(self, a: Complex64, b: Complex64) -> Complex64 {
        match self {
            BinaryOp::Add => a + b,
            BinaryOp::Multiply => a * b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManagerConfig {
    /// Size of the variable universe.
    pub max_qubits: u32,
    pub tolerance: ToleranceConfig,
    /// Largest qubit count that dense conversion accepts.
    pub dense_limit: u32,
}

impl Default for ManagerConfig {
    fn default() -> Self {
        Self {
            max_qubits: 128,
            tolerance: ToleranceConfig::default(),
            dense_limit: 16,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct NodeData {
    level: u32,
    /// Then child, or the terminal id for leaves.
    hi: Id,
    lo: Id,
}

static NEXT_MANAGER: AtomicU32 = AtomicU32::new(1);

/// Owner of a family of decision diagrams. Single threaded; use one manager
/// per thread.
#[derive(Debug)]
pub struct Manager {
    id: u32,
    cfg: ManagerConfig,
    terminals: TerminalTable,
    nodes: Vec<NodeData>,
    terminal_nodes: Vec<Id>,
    unique: FxHashMap<(u32, Id, Id), Id>,
    apply_cache: FxHashMap<(BinaryOp, Id, Id), Id>,
    zero: Id,
    one: Id,
}

impl Default for Manager {
    fn default() -> Self {
        Self::new(ManagerConfig::default())
    }
}

impl Manager {
    pub fn new(cfg: ManagerConfig) -> Self {
        let mut m = Self {
            id: NEXT_MANAGER.fetch_add(1, Ordering::Relaxed),
            cfg,
            terminals: TerminalTable::new(cfg.tolerance),
            nodes: Vec::new(),
            terminal_nodes: Vec::new(),
            unique: FxHashMap::default(),
            apply_cache: FxHashMap::default(),
            zero: 0,
            one: 0,
        };
        m.zero = m.terminal_raw(Complex64::new(0.0, 0.0)).expect("finite");
        m.one = m.terminal_raw(Complex64::new(1.0, 0.0)).expect("finite");
        m
    }

    pub fn with_tolerance(tolerance: ToleranceConfig) -> Self {
        Self::new(ManagerConfig {
            tolerance,
            ..ManagerConfig::default()
        })
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn config(&self) -> &ManagerConfig {
        &self.cfg
    }

    pub fn eps(&self) -> f64 {
        self.terminals.eps()
    }

    /// Number of nodes ever created, terminals included.
    pub fn arena_size(&self) -> usize {
        self.nodes.len()
    }

    pub fn terminal_count(&self) -> usize {
        self.terminals.len()
    }

    pub fn clear_caches(&mut self) {
        self.apply_cache.clear();
    }

    // ---- handle plumbing ----

    pub(crate) fn wrap(&self, id: Id) -> NodeRef {
        NodeRef {
            manager: self.id,
            id,
        }
    }

    pub(crate) fn raw(&self, f: NodeRef) -> Result<Id> {
        if f.manager == self.id {
            Ok(f.id)
        } else {
            Err(Error::ManagerMismatch)
        }
    }

    fn raw_or_panic(&self, f: NodeRef) -> Id {
        self.raw(f)
            .unwrap_or_else(|_| panic!("node {f:?} does not belong to manager {}", self.id))
    }

    pub(crate) fn zero_id(&self) -> Id {
        self.zero
    }

    pub(crate) fn one_id(&self) -> Id {
        self.one
    }

    pub fn zero(&self) -> NodeRef {
        self.wrap(self.zero)
    }

    pub fn one(&self) -> NodeRef {
        self.wrap(self.one)
    }

    // ---- raw node access ----

    #[inline]
    pub(crate) fn level(&self, f: Id) -> u32 {
        self.nodes[f as usize].level
    }

    #[inline]
    pub(crate) fn is_leaf(&self, f: Id) -> bool {
        self.nodes[f as usize].level == TERMINAL_LEVEL
    }

    #[inline]
    pub(crate) fn hi(&self, f: Id) -> Id {
        self.nodes[f as usize].hi
    }

    #[inline]
    pub(crate) fn lo(&self, f: Id) -> Id {
        self.nodes[f as usize].lo
    }

    /// Then/else cofactors of `f` with respect to the variable at `level`.
    #[inline]
    pub(crate) fn cofactors(&self, f: Id, level: u32) -> (Id, Id) {
        let n = self.nodes[f as usize];
        if n.level == level {
            (n.hi, n.lo)
        } else {
            (f, f)
        }
    }

    #[inline]
    pub(crate) fn leaf_value(&self, f: Id) -> Complex64 {
        debug_assert!(self.is_leaf(f));
        self.terminals.value(TerminalId(self.nodes[f as usize].hi))
    }

    pub(crate) fn terminal_raw(&mut self, v: Complex64) -> Result<Id> {
        let tid = self.terminals.intern(v)?;
        if let Some(&n) = self.terminal_nodes.get(tid.0 as usize) {
            return Ok(n);
        }
        debug_assert_eq!(tid.0 as usize, self.terminal_nodes.len());
        let n = self.push(NodeData {
            level: TERMINAL_LEVEL,
            hi: tid.0,
            lo: tid.0,
        });
        self.terminal_nodes.push(n);
        Ok(n)
    }

    fn push(&mut self, data: NodeData) -> Id {
        let id = Id::try_from(self.nodes.len()).expect("node arena overflow");
        self.nodes.push(data);
        id
    }

    /// Hash-consed node constructor with redundant-test elision.
    pub(crate) fn mk(&mut self, level: u32, hi: Id, lo: Id) -> Id {
        if hi == lo {
            return hi;
        }
        debug_assert!(level < self.level(hi) && level < self.level(lo));
        if let Some(&n) = self.unique.get(&(level, hi, lo)) {
            return n;
        }
        let n = self.push(NodeData { level, hi, lo });
        self.unique.insert((level, hi, lo), n);
        n
    }

    pub(crate) fn apply_raw(&mut self, f: Id, g: Id, op: BinaryOp) -> Result<Id> {
        match op {
            BinaryOp::Add => {
                if f == self.zero {
                    return Ok(g);
                }
                if g == self.zero {
                    return Ok(f);
                }
            }
            BinaryOp::Multiply => {
                if f == self.zero || g == self.zero {
                    return Ok(self.zero);
                }
                if f == self.one {
                    return Ok(g);
                }
                if g == self.one {
                    return Ok(f);
                }
            }
        }
        let (f, g) = if f <= g { (f, g) } else { (g, f) };
        if self.is_leaf(f) && self.is_leaf(g) {
            let v = op.eval(self.leaf_value(f), self.leaf_value(g));
            return self.terminal_raw(v);
        }
        if let Some(&r) = self.apply_cache.get(&(op, f, g)) {
            return Ok(r);
        }
        let top = self.level(f).min(self.level(g));
        let (f1, f0) = self.cofactors(f, top);
        let (g1, g0) = self.cofactors(g, top);
        let hi = self.apply_raw(f1, g1, op)?;
        let lo = self.apply_raw(f0, g0, op)?;
        let r = self.mk(top, hi, lo);
        self.apply_cache.insert((op, f, g), r);
        Ok(r)
    }

    pub(crate) fn scale_raw(&mut self, f: Id, c: Complex64) -> Result<Id> {
        let t = self.terminal_raw(c)?;
        self.apply_raw(t, f, BinaryOp::Multiply)
    }

    /// Relabels levels through `map`, which must be strictly increasing on the
    /// support of `f`.
    pub(crate) fn remap_raw(&mut self, f: Id, map: &dyn Fn(u32) -> u32) -> Id {
        let mut memo = FxHashMap::default();
        self.remap_rec(f, map, &mut memo)
    }

    fn remap_rec(&mut self, f: Id, map: &dyn Fn(u32) -> u32, memo: &mut FxHashMap<Id, Id>) -> Id {
        if self.is_leaf(f) {
            return f;
        }
        if let Some(&r) = memo.get(&f) {
            return r;
        }
        let n = self.nodes[f as usize];
        let hi = self.remap_rec(n.hi, map, memo);
        let lo = self.remap_rec(n.lo, map, memo);
        let r = self.mk(map(n.level), hi, lo);
        memo.insert(f, r);
        r
    }

    pub(crate) fn support_levels(&self, f: Id) -> BTreeSet<u32> {
        let mut seen = FxHashSet::default();
        let mut out = BTreeSet::new();
        let mut stack = vec![f];
        while let Some(n) = stack.pop() {
            if self.is_leaf(n) || !seen.insert(n) {
                continue;
            }
            out.insert(self.level(n));
            stack.push(self.hi(n));
            stack.push(self.lo(n));
        }
        out
    }

    pub(crate) fn count_raw(&self, f: Id) -> usize {
        let mut seen = FxHashSet::default();
        let mut stack = vec![f];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            if !self.is_leaf(n) {
                stack.push(self.hi(n));
                stack.push(self.lo(n));
            }
        }
        seen.len()
    }

    fn check_var(&self, var: Variable) -> Result<()> {
        if var.qubit < self.cfg.max_qubits {
            Ok(())
        } else {
            Err(Error::VariableOutOfRange {
                var,
                max_qubits: self.cfg.max_qubits,
            })
        }
    }

    // ---- public surface ----

    pub fn terminal(&mut self, v: Complex64) -> Result<NodeRef> {
        let id = self.terminal_raw(v)?;
        Ok(self.wrap(id))
    }

    pub fn node(&mut self, var: Variable, then_child: NodeRef, else_child: NodeRef) -> Result<NodeRef> {
        self.check_var(var)?;
        let hi = self.raw(then_child)?;
        let lo = self.raw(else_child)?;
        if var.level() >= self.level(hi) || var.level() >= self.level(lo) {
            return Err(Error::OrderViolation { var });
        }
        let id = self.mk(var.level(), hi, lo);
        Ok(self.wrap(id))
    }

    pub fn apply(&mut self, f: NodeRef, g: NodeRef, op: BinaryOp) -> Result<NodeRef> {
        let f = self.raw(f)?;
        let g = self.raw(g)?;
        let r = self.apply_raw(f, g, op)?;
        Ok(self.wrap(r))
    }

    pub fn is_terminal(&self, f: NodeRef) -> bool {
        self.is_leaf(self.raw_or_panic(f))
    }

    pub fn terminal_id(&self, f: NodeRef) -> Option<TerminalId> {
        let f = self.raw_or_panic(f);
        self.is_leaf(f).then(|| TerminalId(self.hi(f)))
    }

    pub fn terminal_value(&self, f: NodeRef) -> Option<Complex64> {
        let f = self.raw_or_panic(f);
        self.is_leaf(f).then(|| self.leaf_value(f))
    }

    pub fn value_of(&self, id: TerminalId) -> Result<Complex64> {
        self.terminals.value_of(id)
    }

    pub fn top_variable(&self, f: NodeRef) -> Option<Variable> {
        let f = self.raw_or_panic(f);
        (!self.is_leaf(f)).then(|| Variable::from_level(self.level(f)))
    }

    /// `(then, else)` children of an internal node.
    pub fn children(&self, f: NodeRef) -> Option<(NodeRef, NodeRef)> {
        let f = self.raw_or_panic(f);
        (!self.is_leaf(f)).then(|| (self.wrap(self.hi(f)), self.wrap(self.lo(f))))
    }

    /// Variables appearing on some path of `f`.
    ///
    /// # Panics
    /// If `f` was issued by another manager.
    pub fn support(&self, f: NodeRef) -> BTreeSet<Variable> {
        self.support_levels(self.raw_or_panic(f))
            .into_iter()
            .map(Variable::from_level)
            .collect()
    }

    /// Internal nodes plus distinct terminals reachable from `f`.
    ///
    /// # Panics
    /// If `f` was issued by another manager.
    pub fn node_count(&self, f: NodeRef) -> usize {
        self.count_raw(self.raw_or_panic(f))
    }

    /// Renames variables of `f`. Variables absent from `map` keep their name.
    /// The map must be injective and order preserving on the support of `f`.
    pub fn remap_variables(&mut self, f: NodeRef, map: &HashMap<Variable, Variable>) -> Result<NodeRef> {
        let raw = self.raw(f)?;
        let mut levels = FxHashMap::default();
        let mut prev: Option<(Variable, Variable)> = None;
        for level in self.support_levels(raw) {
            let from = Variable::from_level(level);
            let to = map.get(&from).copied().unwrap_or(from);
            self.check_var(to)?;
            if let Some((_, prev_to)) = prev {
                if to.level() <= prev_to.level() {
                    return Err(Error::NonMonotoneRemap { from, to });
                }
            }
            prev = Some((from, to));
            levels.insert(level, to.level());
        }
        let r = self.remap_raw(raw, &|l| levels[&l]);
        Ok(self.wrap(r))
    }

    /// Follows then-edges for `true` and else-edges for `false`.
    pub fn eval(&self, f: NodeRef, assignment: &HashMap<Variable, bool>) -> Result<Complex64> {
        let mut n = self.raw(f)?;
        while !self.is_leaf(n) {
            let var = Variable::from_level(self.level(n));
            let bit = *assignment.get(&var).ok_or(Error::MissingVariable(var))?;
            n = if bit { self.hi(n) } else { self.lo(n) };
        }
        Ok(self.leaf_value(n))
    }

    /// Text dump: one line per reachable node, children before parents, ids
    /// renumbered in that order. Internal nodes print `id var then else`,
    /// terminals print `id = re im`.
    pub fn export_text(&self, f: NodeRef) -> String {
        let root = self.raw_or_panic(f);
        let mut order: Vec<Id> = Vec::new();
        let mut index: FxHashMap<Id, usize> = FxHashMap::default();
        // iterative post-order
        let mut stack = vec![(root, false)];
        while let Some((n, expanded)) = stack.pop() {
            if index.contains_key(&n) {
                continue;
            }
            if expanded || self.is_leaf(n) {
                index.insert(n, order.len());
                order.push(n);
            } else {
                stack.push((n, true));
                stack.push((self.lo(n), false));
                stack.push((self.hi(n), false));
            }
        }
        let mut out = String::new();
        for (i, &n) in order.iter().enumerate() {
            if self.is_leaf(n) {
                let v = self.leaf_value(n);
                let _ = writeln!(out, "{i} = {} {}", v.re, v.im);
            } else {
                let var = Variable::from_level(self.level(n));
                let _ = writeln!(out, "{i} {var} {} {}", index[&self.hi(n)], index[&self.lo(n)]);
            }
        }
        out
    }

    /// Walks the whole arena and reports the first broken structural
    /// invariant: reducedness, ordering, uniqueness of internal triples and of
    /// terminal ids.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut triples = FxHashSet::default();
        let mut leaves = FxHashSet::default();
        for (i, n) in self.nodes.iter().enumerate() {
            if n.level == TERMINAL_LEVEL {
                if !leaves.insert(n.hi) {
                    return Err(format!("terminal id {} owned by two nodes", n.hi));
                }
                if self.terminal_nodes.get(n.hi as usize) != Some(&(i as Id)) {
                    return Err(format!("terminal node {i} not registered"));
                }
                continue;
            }
            if n.hi == n.lo {
                return Err(format!("node {i} has identical children"));
            }
            if n.level >= self.level(n.hi) || n.level >= self.level(n.lo) {
                return Err(format!("node {i} violates the variable order"));
            }
            if !triples.insert((n.level, n.hi, n.lo)) {
                return Err(format!("node {i} duplicates an existing triple"));
            }
            if self.unique.get(&(n.level, n.hi, n.lo)) != Some(&(i as Id)) {
                return Err(format!("node {i} missing from the unique table"));
            }
        }
        Ok(())
    }

    #[doc(hidden)]
    /// Fault-injection hook: silently changes the value behind a terminal.
    pub fn corrupt_terminal_for_testing(&mut self, id: TerminalId, v: Complex64) {
        self.terminals.overwrite(id, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// Mid-range 2-qubit vector (1/2, 1/2, -1/2, 1/2): C0 = 1 leads to a C1
    /// node whose else edge reaches -1/2 (index 10).
    fn mid_range(m: &mut Manager) -> NodeRef {
        let p = m.terminal(c(0.5)).unwrap();
        let n = m.terminal(c(-0.5)).unwrap();
        let c1 = m.node(Variable::column(1), p, n).unwrap();
        m.node(Variable::column(0), c1, p).unwrap()
    }

    fn assign(pairs: &[(Variable, bool)]) -> HashMap<Variable, bool> {
        pairs.iter().copied().collect()
    }

    #[test]
    fn order_is_interleaved() {
        let mut vars = vec![
            Variable::column(1),
            Variable::row(1),
            Variable::column(0),
            Variable::row(0),
            Variable::scratch(0),
        ];
        vars.sort();
        let names: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        assert_eq!(names, ["R0", "C0", "S0", "R1", "C1"]);
        for l in 0..30 {
            assert_eq!(Variable::from_level(l).level(), l);
        }
    }

    #[test]
    fn terminals_are_hash_consed() {
        let mut m = Manager::default();
        let a = m.terminal(c(0.0)).unwrap();
        let b = m.terminal(c(0.0)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, m.zero());
        assert_ne!(m.terminal(c(0.5)).unwrap(), m.terminal(c(-0.5)).unwrap());
        let t = m.terminal(Complex64::new(0.25, -1.0)).unwrap();
        assert_eq!(m.eval(t, &HashMap::new()).unwrap(), Complex64::new(0.25, -1.0));
        assert!(m.terminal(c(f64::INFINITY)).is_err());
    }

    #[test]
    fn redundant_node_is_elided() {
        let mut m = Manager::default();
        let x = m.terminal(c(0.3)).unwrap();
        assert_eq!(m.node(Variable::column(0), x, x).unwrap(), x);
    }

    #[test]
    fn nodes_are_unique() {
        let mut m = Manager::default();
        let (one, zero) = (m.one(), m.zero());
        let a = m.node(Variable::column(0), one, zero).unwrap();
        let b = m.node(Variable::column(0), one, zero).unwrap();
        assert_eq!(a, b);
        assert_eq!(m.node_count(a), 3);
    }

    #[test]
    fn order_violation_is_rejected() {
        let mut m = Manager::default();
        let (one, zero) = (m.one(), m.zero());
        let inner = m.node(Variable::column(0), one, zero).unwrap();
        assert_eq!(
            m.node(Variable::column(1), inner, zero),
            Err(Error::OrderViolation {
                var: Variable::column(1)
            })
        );
        assert!(m.node(Variable::column(0), inner, zero).is_err());
    }

    #[test]
    fn variable_universe_is_bounded() {
        let mut m = Manager::new(ManagerConfig {
            max_qubits: 2,
            ..ManagerConfig::default()
        });
        let (one, zero) = (m.one(), m.zero());
        assert!(matches!(
            m.node(Variable::row(2), one, zero),
            Err(Error::VariableOutOfRange { .. })
        ));
    }

    #[test]
    fn mid_range_vector_shape() {
        let mut m = Manager::default();
        let f = mid_range(&mut m);
        assert_eq!(m.node_count(f), 4);
        let v = m
            .eval(f, &assign(&[(Variable::column(0), true), (Variable::column(1), false)]))
            .unwrap();
        assert_eq!(v, c(-0.5));
        let expected = [0.5, 0.5, -0.5, 0.5];
        for (i, e) in expected.iter().enumerate() {
            let a = assign(&[(Variable::column(0), i & 2 != 0), (Variable::column(1), i & 1 != 0)]);
            assert_eq!(m.eval(f, &a).unwrap(), c(*e));
        }
        let support: Vec<Variable> = m.support(f).into_iter().collect();
        assert_eq!(support, vec![Variable::column(0), Variable::column(1)]);
    }

    #[test]
    fn eval_requires_full_assignment() {
        let mut m = Manager::default();
        let f = mid_range(&mut m);
        assert_eq!(
            m.eval(f, &HashMap::new()),
            Err(Error::MissingVariable(Variable::column(0)))
        );
    }

    #[test]
    fn support_and_count_of_terminal() {
        let m = Manager::default();
        assert!(m.support(m.one()).is_empty());
        assert_eq!(m.node_count(m.one()), 1);
    }

    #[test]
    fn apply_with_zero_is_identity() {
        let mut m = Manager::default();
        let f = mid_range(&mut m);
        let z = m.zero();
        assert_eq!(m.apply(f, z, BinaryOp::Add).unwrap(), f);
        assert_eq!(m.apply(z, f, BinaryOp::Multiply).unwrap(), z);
    }

    #[test]
    fn remap_identity_and_shift() {
        let mut m = Manager::default();
        let f = mid_range(&mut m);
        assert_eq!(m.remap_variables(f, &HashMap::new()).unwrap(), f);
        let map: HashMap<_, _> = [
            (Variable::column(0), Variable::row(0)),
            (Variable::column(1), Variable::row(1)),
        ]
        .into_iter()
        .collect();
        let g = m.remap_variables(f, &map).unwrap();
        assert_eq!(m.node_count(g), m.node_count(f));
        let a = assign(&[(Variable::row(0), true), (Variable::row(1), false)]);
        assert_eq!(m.eval(g, &a).unwrap(), c(-0.5));
    }

    #[test]
    fn remap_must_preserve_order() {
        let mut m = Manager::default();
        let p = m.terminal(c(0.5)).unwrap();
        let q = m.terminal(c(0.25)).unwrap();
        let lower = m.node(Variable::column(1), p, q).unwrap();
        let f = m.node(Variable::column(0), lower, q).unwrap();
        let map: HashMap<_, _> = [(Variable::column(0), Variable::column(2))].into_iter().collect();
        assert!(matches!(
            m.remap_variables(f, &map),
            Err(Error::NonMonotoneRemap { .. })
        ));
    }

    #[test]
    fn foreign_nodes_are_rejected() {
        let mut a = Manager::default();
        let b = Manager::default();
        let x = b.one();
        let y = a.one();
        assert_eq!(a.apply(x, y, BinaryOp::Add), Err(Error::ManagerMismatch));
    }

    #[test]
    fn export_is_post_order() {
        let mut m = Manager::default();
        let f = mid_range(&mut m);
        assert_eq!(m.export_text(f), "0 = 0.5 0\n1 = -0.5 0\n2 C1 0 1\n3 C0 2 0\n");
    }

    #[test]
    fn corrupt_hook_changes_value() {
        let mut m = Manager::default();
        let t = m.terminal(c(0.5)).unwrap();
        let id = m.terminal_id(t).unwrap();
        m.corrupt_terminal_for_testing(id, c(0.75));
        assert_eq!(m.terminal_value(t), Some(c(0.75)));
    }
}
