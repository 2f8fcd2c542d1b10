#![allow(dead_code)]

use std::collections::HashMap;

use num_complex::Complex64;
use quidd::reference::DenseMatrix;
use quidd::{Manager, NodeRef, Variable};
use rand::Rng;

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Small value set so that random diagrams share terminals and reduce.
pub const PALETTE: [Complex64; 6] = [
    Complex64::new(0.0, 0.0),
    Complex64::new(1.0, 0.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.5, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(0.25, -0.75),
];

/// `R0 < C0 < R1 < C1 < ...` for `qubits` qubits.
pub fn interleaved(qubits: u32) -> Vec<Variable> {
    (0..qubits).flat_map(|q| [Variable::row(q), Variable::column(q)]).collect()
}

/// Random diagram over `vars` built bottom-up through the public node API.
pub fn random_dd(mgr: &mut Manager, rng: &mut impl Rng, vars: &[Variable]) -> NodeRef {
    fn go(mgr: &mut Manager, rng: &mut impl Rng, vars: &[Variable], from: usize) -> NodeRef {
        if from == vars.len() || rng.gen_bool(0.2) {
            let v = PALETTE[rng.gen_range(0..PALETTE.len())];
            return mgr.terminal(v).unwrap();
        }
        let j = rng.gen_range(from..vars.len().min(from + 2));
        let t = go(mgr, rng, vars, j + 1);
        let e = go(mgr, rng, vars, j + 1);
        mgr.node(vars[j], t, e).unwrap()
    }
    go(mgr, rng, vars, 0)
}

fn assignment(vars: &[Variable], bits: usize) -> HashMap<Variable, bool> {
    let n = vars.len();
    vars.iter()
        .enumerate()
        .map(|(i, &v)| (v, bits >> (n - 1 - i) & 1 == 1))
        .collect()
}

/// Values of `f` for every assignment, first variable most significant.
pub fn truth_table(mgr: &Manager, f: NodeRef, vars: &[Variable]) -> Vec<Complex64> {
    (0..1usize << vars.len())
        .map(|bits| mgr.eval(f, &assignment(vars, bits)).unwrap())
        .collect()
}

/// Shannon expansion of a truth table through the public node API.
pub fn from_truth_table(mgr: &mut Manager, table: &[Complex64], vars: &[Variable]) -> NodeRef {
    if vars.is_empty() {
        return mgr.terminal(table[0]).unwrap();
    }
    let half = table.len() / 2;
    let e = from_truth_table(mgr, &table[..half], &vars[1..]);
    let t = from_truth_table(mgr, &table[half..], &vars[1..]);
    mgr.node(vars[0], t, e).unwrap()
}

pub fn random_values(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                PALETTE[rng.gen_range(0..PALETTE.len())]
            } else {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            }
        })
        .collect()
}

pub fn random_dense_matrix(rng: &mut impl Rng, qubits: u32) -> DenseMatrix {
    let dim = 1usize << qubits;
    DenseMatrix::from_row_major(dim, random_values(rng, dim * dim)).unwrap()
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
