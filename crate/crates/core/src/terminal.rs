//! Interned complex terminal values.
//!
//! Decision-diagram terminals never hold a complex number directly. They hold
//! a [`TerminalId`] into a [`TerminalTable`], and the table guarantees that two
//! values within the configured tolerance share one id. Node equality is then
//! plain integer equality.

use std::fmt;

use num_complex::Complex64;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

pub type ComplexValue = Complex64;

/// Default absolute per-component interning tolerance.
pub const DEFAULT_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TerminalId(pub(crate) u32);

impl TerminalId {
    pub fn index(self) -> u32 {
        self.0
    }
}

impl fmt::Display for TerminalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    eps: f64,
}

impl ToleranceConfig {
    pub fn new(eps: f64) -> Result<Self> {
        if eps.is_finite() && eps > 0.0 {
            Ok(Self { eps })
        } else {
            Err(Error::InvalidTolerance(eps))
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Reads `QUIDD_EPS`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var("QUIDD_EPS") {
            Ok(s) => {
                let eps: f64 = s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Usage(format!("QUIDD_EPS={s:?} is not a number")))?;
                Self::new(eps)
            }
            Err(_) => Ok(Self::default()),
        }
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { eps: DEFAULT_EPS }
    }
}

/// Append-only table of canonical complex values.
///
/// Lookup quantizes each component onto an `eps` grid. Any stored value within
/// `eps` of a query lies in the query's cell or one of its eight neighbours, so
/// probing the 3x3 block is exhaustive. Among several matches the smallest
/// (first inserted) id wins.
#[derive(Debug, Clone)]
pub struct TerminalTable {
    values: Vec<Complex64>,
    cells: FxHashMap<(i64, i64), Vec<u32>>,
    eps: f64,
}

impl TerminalTable {
    pub fn new(cfg: ToleranceConfig) -> Self {
        Self {
            values: Vec::new(),
            cells: FxHashMap::default(),
            eps: cfg.eps,
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn cell(&self, v: Complex64) -> (i64, i64) {
        // `as` saturates, so huge magnitudes share the extreme cells.
        ((v.re / self.eps).floor() as i64, (v.im / self.eps).floor() as i64)
    }

    pub fn find(&self, v: Complex64) -> Option<TerminalId> {
        let (cr, ci) = self.cell(v);
        let mut best: Option<u32> = None;
        for dr in -1..=1i64 {
            for di in -1..=1i64 {
                let key = (cr.saturating_add(dr), ci.saturating_add(di));
                let Some(ids) = self.cells.get(&key) else {
                    continue;
                };
                for &id in ids {
                    let w = self.values[id as usize];
                    if (v.re - w.re).abs() <= self.eps
                        && (v.im - w.im).abs() <= self.eps
                        && best.is_none_or(|b| id < b)
                    {
                        best = Some(id);
                    }
                }
            }
        }
        best.map(TerminalId)
    }

    pub fn intern(&mut self, v: Complex64) -> Result<TerminalId> {
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinite(v));
        }
        if let Some(id) = self.find(v) {
            return Ok(id);
        }
        let id = u32::try_from(self.values.len()).expect("terminal table overflow");
        self.values.push(v);
        let key = self.cell(v);
        self.cells.entry(key).or_default().push(id);
        Ok(TerminalId(id))
    }

    pub fn value_of(&self, id: TerminalId) -> Result<Complex64> {
        self.values
            .get(id.0 as usize)
            .copied()
            .ok_or(Error::InvalidTerminal(id.0))
    }

    pub(crate) fn value(&self, id: TerminalId) -> Complex64 {
        self.values[id.0 as usize]
    }

    /// Overwrites a stored value without re-indexing. Only for fault-injection
    /// tests: the table no longer honours its lookup contract afterwards.
    pub(crate) fn overwrite(&mut self, id: TerminalId, v: Complex64) {
        self.values[id.0 as usize] = v;
    }
}
