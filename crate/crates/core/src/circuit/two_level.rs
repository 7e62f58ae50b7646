use std::collections::{BTreeSet, HashMap};

use num_complex::Complex64;
use serde::Serialize;

use super::plan::SparseUnitary;
use crate::error::{Error, Result};

/// Largest column Gram deviation accepted as unitary.
pub const UNITARY_TOL: f64 = 1e-9;
const DROP: f64 = 1e-14;
const NONZERO: f64 = 1e-12;

/// A unitary acting only on basis states `i` and `j` (equal only for a 1x1 phase), with
/// `m[0][0] = <i|T|i>`, `m[0][1] = <i|T|j>`, `m[1][0] = <j|T|i>`, `m[1][1] = <j|T|j>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoLevel {
    pub i: usize,
    pub j: usize,
    pub m: [[Complex64; 2]; 2],
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

struct Rows {
    rows: Vec<HashMap<usize, Complex64>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Rows {
    fn get(&self, r: usize, col: usize) -> Complex64 {
        self.rows[r].get(&col).copied().unwrap_or_default()
    }

    /// Left-multiplies rows (a, b) by g.
    fn rotate(&mut self, a: usize, b: usize, g: [[Complex64; 2]; 2]) {
        let touched: BTreeSet<usize> = self.rows[a].keys().chain(self.rows[b].keys()).copied().collect();
        for col in touched {
            let (x, y) = (self.get(a, col), self.get(b, col));
            for (r, v) in [(a, g[0][0] * x + g[0][1] * y), (b, g[1][0] * x + g[1][1] * y)] {
                if v.norm() > DROP {
                    self.rows[r].insert(col, v);
                    self.cols[col].insert(r);
                } else {
                    self.rows[r].remove(&col);
                    self.cols[col].remove(&r);
                }
            }
        }
    }
}

fn adjoint(g: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [[g[0][0].conj(), g[1][0].conj()], [g[0][1].conj(), g[1][1].conj()]]
}

/// If row `r` is now a phase times e_r, folds the phase into the second row of `g` so the
/// diagonal needs no later fix. Returns the recorded factor, the adjoint of the applied `g`.
fn settle(w: &mut Rows, r: usize, mut g: [[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    if w.rows[r].len() == 1 {
        if let Some(&p) = w.rows[r].get(&r) {
            if (p - 1.0).norm() > NONZERO {
                let f = p.conj() / p.norm();
                w.rows[r].insert(r, p * f);
                g[1][0] *= f;
                g[1][1] *= f;
            }
        }
    }
    adjoint(g)
}

/// Writes `u` as T_1 T_2 ... T_k by clearing each column below the diagonal in turn, applied to
/// `u` or to its adjoint, whichever needs fewer factors.
pub fn two_level_decompose(u: &SparseUnitary) -> Result<Vec<TwoLevel>> {
    let dev = u.unitarity_deviation();
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    Ok(decompose(u))
}

pub(crate) fn decompose(u: &SparseUnitary) -> Vec<TwoLevel> {
    let dim = u.dim();
    let mut direct = Rows { rows: vec![HashMap::new(); dim], cols: vec![BTreeSet::new(); dim] };
    let mut adj = Rows { rows: vec![HashMap::new(); dim], cols: vec![BTreeSet::new(); dim] };
    for (col, entries) in u.columns().iter().enumerate() {
        for (r, v) in entries {
            let z = v.to_complex();
            direct.rows[*r].insert(col, z);
            direct.cols[col].insert(*r);
            adj.rows[col].insert(*r, z.conj());
            adj.cols[*r].insert(col);
        }
    }
    let a = eliminate(direct);
    let b = eliminate(adj);
    if a.len() <= b.len() {
        a
    } else {
        // u^dagger = T_1 ... T_k gives u = T_k^dagger ... T_1^dagger.
        b.into_iter().rev().map(|t| TwoLevel { m: adjoint(t.m), ..t }).collect()
    }
}

fn eliminate(mut w: Rows) -> Vec<TwoLevel> {
    let dim = w.rows.len();
    let mut ops = Vec::new();
    if dim == 1 {
        let p = w.get(0, 0);
        if (p - 1.0).norm() > NONZERO {
            ops.push(TwoLevel { i: 0, j: 0, m: [[p, c(0.0)], [c(0.0), p]] });
        }
        return ops;
    }
    for col in 0..dim {
        let rows: Vec<usize> = w.cols[col].range(col..).copied().collect();
        if rows.is_empty() {
            continue;
        }
        // Reduce the column onto one pivot row using rows of the same column only, then move it.
        let pivot = if rows[0] == col { col } else { rows[0] };
        for &r in rows.iter().filter(|&&r| r != pivot) {
            let (a, b) = (w.get(pivot, col), w.get(r, col));
            if b.norm() <= NONZERO {
                continue;
            }
            let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let g = [[a.conj() / n, b.conj() / n], [b / n, -a / n]];
            w.rotate(pivot, r, g);
            ops.push(TwoLevel { i: pivot, j: r, m: settle(&mut w, r, g) });
        }
        let p = w.get(pivot, col);
        if pivot != col {
            let g = [[c(0.0), p.conj()], [c(1.0), c(0.0)]];
            w.rotate(col, pivot, g);
            ops.push(TwoLevel { i: col, j: pivot, m: settle(&mut w, pivot, g) });
        } else if (p - 1.0).norm() > NONZERO {
            let (i, j, g) = if col + 1 < dim {
                (col, col + 1, [[p.conj(), c(0.0)], [c(0.0), p]])
            } else {
                (col - 1, col, [[c(1.0), c(0.0)], [c(0.0), p.conj()]])
            };
            w.rotate(i, j, g);
            ops.push(TwoLevel { i, j, m: adjoint(g) });
        }
    }
    ops
}

/// max |(T_1 ... T_k)_{rc} - U_{rc}|.
pub fn reconstruct(u: &SparseUnitary, ops: &[TwoLevel]) -> f64 {
    let dim = u.dim();
    let mut p: Vec<HashMap<usize, Complex64>> = (0..dim).map(|k| HashMap::from([(k, c(1.0))])).collect();
    for t in ops {
        if t.i == t.j {
            for v in p[t.i].values_mut() {
                *v *= t.m[0][0];
            }
            continue;
        }
        let (ci, cj) = (std::mem::take(&mut p[t.i]), std::mem::take(&mut p[t.j]));
        let rows: BTreeSet<usize> = ci.keys().chain(cj.keys()).copied().collect();
        for r in rows {
            let (x, y) = (ci.get(&r).copied().unwrap_or_default(), cj.get(&r).copied().unwrap_or_default());
            let (ni, nj) = (x * t.m[0][0] + y * t.m[1][0], x * t.m[0][1] + y * t.m[1][1]);
            if ni.norm() > DROP {
                p[t.i].insert(r, ni);
            }
            if nj.norm() > DROP {
                p[t.j].insert(r, nj);
            }
        }
    }
    let mut err: f64 = 0.0;
    for (col, entries) in p.iter().enumerate() {
        let target: HashMap<usize, Complex64> = u.column(col).iter().map(|(r, v)| (*r, v.to_complex())).collect();
        for r in entries.keys().chain(target.keys()) {
            let d = entries.get(r).copied().unwrap_or_default() - target.get(r).copied().unwrap_or_default();
            err = err.max(d.norm());
        }
    }
    err
}

/// Nonzero entries on or below the diagonal, not counting diagonal entries equal to 1.
pub fn diagonal_bound(u: &SparseUnitary) -> usize {
    u.columns()
        .iter()
        .enumerate()
        .map(|(col, entries)| {
            entries
                .iter()
                .filter(|(r, v)| *r >= col && !(*r == col && (v.to_complex() - 1.0).norm() <= NONZERO))
                .count()
        })
        .sum()
}
