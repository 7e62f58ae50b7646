use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::two_level::UNITARY_TOL;
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::scalar::Scalar;

pub type RegId = usize;

/// Qubits needed for `k` distinct values; zero for a single value.
pub fn ceil_log2(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

/// A named register holding one of finitely many values, value `values[k]` stored as code `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub width: u32,
    #[serde(rename = "encoding")]
    pub values: Vec<HalfInt>,
}

impl Register {
    /// Minimal width for the given values.
    pub fn encoded(name: impl Into<String>, values: Vec<HalfInt>) -> Self {
        let width = ceil_log2(values.len());
        Register { name: name.into(), width, values }
    }

    pub fn with_width(name: impl Into<String>, values: Vec<HalfInt>, width: u32) -> Self {
        assert!(values.len() <= 1 << width, "values do not fit the width");
        Register { name: name.into(), width, values }
    }

    /// `width` zeroed qubits.
    pub fn ancilla(name: impl Into<String>, width: u32) -> Self {
        Register { name: name.into(), width, values: vec![HalfInt::ZERO] }
    }

    pub fn code_of(&self, v: HalfInt) -> Option<usize> {
        self.values.iter().position(|&x| x == v)
    }
}

/// A unitary stored by columns: `columns[c]` lists the nonzero `(row, value)` pairs of U e_c.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseUnitary {
    dim: usize,
    columns: Vec<Vec<(usize, Scalar)>>,
}

impl SparseUnitary {
    pub fn new(dim: usize, mut columns: Vec<Vec<(usize, Scalar)>>) -> Result<Self> {
        if columns.len() != dim {
            return Err(Error::MalformedPlan(format!("{} columns for dimension {dim}", columns.len())));
        }
        for col in columns.iter_mut() {
            col.retain(|(_, v)| !v.is_zero());
            col.sort_by_key(|e| e.0);
            if col.iter().any(|e| e.0 >= dim) || col.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::MalformedPlan("row index out of range or repeated".into()));
            }
        }
        Ok(SparseUnitary { dim, columns })
    }

    pub fn identity(dim: usize) -> Self {
        SparseUnitary { dim, columns: (0..dim).map(|c| vec![(c, Scalar::one())]).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, c: usize) -> &[(usize, Scalar)] {
        &self.columns[c]
    }

    pub fn columns(&self) -> &[Vec<(usize, Scalar)>] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_permutation(&self) -> bool {
        self.columns.iter().all(|c| c.len() == 1 && c[0].1 == Scalar::one())
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.columns[col].iter().find(|e| e.0 == row).map(|e| e.1.to_complex()).unwrap_or_default()
    }

    /// max |(U^dagger U - I)_{ab}|, computed sparsely.
    pub fn unitarity_deviation(&self) -> f64 {
        let mut by_row: HashMap<usize, Vec<(usize, Complex64)>> = HashMap::new();
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                by_row.entry(*r).or_default().push((c, v.to_complex()));
            }
        }
        let mut gram: HashMap<(usize, usize), Complex64> = HashMap::new();
        for entries in by_row.values() {
            for &(a, va) in entries {
                for &(b, vb) in entries {
                    *gram.entry((a, b)).or_default() += va.conj() * vb;
                }
            }
        }
        let mut dev: f64 = 0.0;
        for c in 0..self.dim {
            let g = gram.get(&(c, c)).copied().unwrap_or_default();
            dev = dev.max((g - 1.0).norm());
        }
        for (&(a, b), g) in &gram {
            if a != b {
                dev = dev.max(g.norm());
            }
        }
        dev
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let mut m = nalgebra::DMatrix::zeros(self.dim, self.dim);
        for (c, col) in self.columns.iter().enumerate() {
            for (r, v) in col {
                m[(*r, c)] = v.to_complex();
            }
        }
        m
    }
}

/// A unitary on the concatenated codes of `inputs`, producing the concatenated codes of
/// `outputs` on the same qubits. The first register is most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiRegisterUnitary {
    pub label: String,
    pub inputs: Vec<RegId>,
    pub outputs: Vec<RegId>,
    pub matrix: SparseUnitary,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Alloc(RegId),
    Release(RegId),
    Unitary(MultiRegisterUnitary),
}

/// An ordered list of register-level unitaries and register lifecycle events.
#[derive(Debug, Clone, PartialEq)]
pub struct CircuitPlan {
    pub name: String,
    pub registers: Vec<Register>,
    pub inputs: Vec<RegId>,
    pub outputs: Vec<RegId>,
    pub steps: Vec<Step>,
}

impl CircuitPlan {
    pub fn register(&self, id: RegId) -> &Register {
        &self.registers[id]
    }

    pub fn register_id(&self, name: &str) -> Option<RegId> {
        self.registers.iter().position(|r| r.name == name)
    }

    pub fn width(&self, regs: &[RegId]) -> u32 {
        regs.iter().map(|&r| self.registers[r].width).sum()
    }

    pub fn unitaries(&self) -> impl Iterator<Item = &MultiRegisterUnitary> {
        self.steps.iter().filter_map(|s| match s {
            Step::Unitary(u) => Some(u),
            _ => None,
        })
    }

    /// Checks register bookkeeping and returns the peak number of live qubits.
    pub fn peak_qubits(&self) -> Result<u32> {
        let bad = |m: String| Err(Error::MalformedPlan(m));
        let mut live: BTreeSet<RegId> = BTreeSet::new();
        for &r in &self.inputs {
            if r >= self.registers.len() || !live.insert(r) {
                return bad(format!("input register {r} unknown or repeated"));
            }
        }
        let mut current = self.width(&self.inputs);
        let mut peak = current;
        for (k, step) in self.steps.iter().enumerate() {
            match step {
                Step::Alloc(r) => {
                    if !live.insert(*r) {
                        return bad(format!("step {k}: register {} allocated while live", self.registers[*r].name));
                    }
                    current += self.registers[*r].width;
                }
                Step::Release(r) => {
                    if !live.remove(r) {
                        return bad(format!("step {k}: register {} released while not live", self.registers[*r].name));
                    }
                    current -= self.registers[*r].width;
                }
                Step::Unitary(u) => {
                    for r in &u.inputs {
                        if !live.remove(r) {
                            return bad(format!("step {k} ({}): input {} not live", u.label, self.registers[*r].name));
                        }
                    }
                    for r in &u.outputs {
                        if !live.insert(*r) {
                            return bad(format!(
                                "step {k} ({}): output {} already live",
                                u.label, self.registers[*r].name
                            ));
                        }
                    }
                    let (wi, wo) = (self.width(&u.inputs), self.width(&u.outputs));
                    if wi != wo || u.matrix.dim() != 1usize << wi {
                        return bad(format!("step {k} ({}): widths {wi} -> {wo}, matrix {}", u.label, u.matrix.dim()));
                    }
                }
            }
            peak = peak.max(current);
        }
        let expected: BTreeSet<RegId> = self.outputs.iter().copied().collect();
        if live != expected || expected.len() != self.outputs.len() {
            return bad("live registers at the end differ from the declared outputs".into());
        }
        Ok(peak)
    }

    /// This plan followed by `next`, matching registers by name.
    pub fn then(&self, next: &CircuitPlan) -> Result<CircuitPlan> {
        let mut out = self.clone();
        let mut map = Vec::with_capacity(next.registers.len());
        for (k, reg) in next.registers.iter().enumerate() {
            let shared = next.inputs.contains(&k);
            match out.register_id(&reg.name) {
                Some(id) if shared && out.registers[id] == *reg => map.push(id),
                Some(_) if shared => {
                    return Err(Error::MalformedPlan(format!("register {} differs between plans", reg.name)))
                }
                _ => {
                    let mut fresh = reg.clone();
                    while out.register_id(&fresh.name).is_some() {
                        fresh.name.push('\'');
                    }
                    out.registers.push(fresh);
                    map.push(out.registers.len() - 1);
                }
            }
        }
        let next_inputs: Vec<RegId> = next.inputs.iter().map(|&r| map[r]).collect();
        if next_inputs != self.outputs {
            return Err(Error::MalformedPlan("outputs of the first plan are not the inputs of the second".into()));
        }
        for s in &next.steps {
            out.steps.push(match s {
                Step::Alloc(r) => Step::Alloc(map[*r]),
                Step::Release(r) => Step::Release(map[*r]),
                Step::Unitary(u) => Step::Unitary(MultiRegisterUnitary {
                    label: u.label.clone(),
                    inputs: u.inputs.iter().map(|&r| map[r]).collect(),
                    outputs: u.outputs.iter().map(|&r| map[r]).collect(),
                    matrix: u.matrix.clone(),
                }),
            });
        }
        out.outputs = next.outputs.iter().map(|&r| map[r]).collect();
        out.name = format!("{} ; {}", self.name, next.name);
        Ok(out)
    }
}

type Column = Vec<(usize, Complex64)>;

fn sparse_norm(v: &BTreeMap<usize, Complex64>) -> f64 {
    v.values().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Extends orthonormal columns given at positions `given` to a unitary of dimension `dim`.
///
/// A free column outside the rows touched by the given columns is set to its own basis vector;
/// the rest are filled by Gram-Schmidt over basis vectors in increasing index order.
pub fn complete_unitary(dim: usize, given: Vec<(usize, Vec<(usize, Scalar)>)>) -> Result<SparseUnitary> {
    let mut columns: Vec<Option<Vec<(usize, Scalar)>>> = vec![None; dim];
    let mut supp: BTreeSet<usize> = BTreeSet::new();
    let mut by_row: HashMap<usize, Vec<(usize, Complex64)>> = HashMap::new();
    for (c, col) in given {
        if c >= dim || columns[c].is_some() {
            return Err(Error::MalformedPlan(format!("given column {c} out of range or repeated")));
        }
        let col: Vec<(usize, Scalar)> = col.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        for (r, v) in &col {
            if *r >= dim {
                return Err(Error::MalformedPlan(format!("row {r} out of range")));
            }
            supp.insert(*r);
            by_row.entry(*r).or_default().push((c, v.to_complex()));
        }
        columns[c] = Some(col);
    }
    let given_cols: BTreeSet<usize> = (0..dim).filter(|&c| columns[c].is_some()).collect();

    // Orthonormality of the given columns.
    let mut gram: HashMap<(usize, usize), Complex64> = HashMap::new();
    for entries in by_row.values() {
        for &(a, va) in entries {
            for &(b, vb) in entries {
                *gram.entry((a, b)).or_default() += va.conj() * vb;
            }
        }
    }
    let mut dev: f64 = 0.0;
    for &c in &given_cols {
        dev = dev.max((gram.get(&(c, c)).copied().unwrap_or_default() - 1.0).norm());
    }
    for (&(a, b), g) in &gram {
        if a != b {
            dev = dev.max(g.norm());
        }
    }
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }

    if given_cols.len() == supp.len() {
        return Ok(close_components(dim, columns, &supp));
    }
    let free_in_supp: Vec<usize> = (0..dim).filter(|c| !given_cols.contains(c) && supp.contains(c)).collect();
    for c in 0..dim {
        if columns[c].is_none() && !supp.contains(&c) {
            columns[c] = Some(vec![(c, Scalar::one())]);
        }
    }
    if !free_in_supp.is_empty() {
        let candidates: BTreeSet<usize> = supp.union(&given_cols).copied().collect();
        let mut made: Vec<Column> = Vec::new();
        let mut made_by_row: HashMap<usize, Vec<(usize, Complex64)>> = HashMap::new();
        for r in candidates {
            if made.len() == free_in_supp.len() {
                break;
            }
            let mut v: BTreeMap<usize, Complex64> = BTreeMap::new();
            v.insert(r, Complex64::new(1.0, 0.0));
            for _pass in 0..2 {
                let mut proj: BTreeMap<usize, Complex64> = BTreeMap::new();
                // <g|v> for every given or completed column g that meets v's rows.
                let mut overlaps: HashMap<(bool, usize), Complex64> = HashMap::new();
                for (&row, &x) in &v {
                    if let Some(es) = by_row.get(&row) {
                        for &(c, g) in es {
                            *overlaps.entry((true, c)).or_default() += g.conj() * x;
                        }
                    }
                    if let Some(es) = made_by_row.get(&row) {
                        for &(k, g) in es {
                            *overlaps.entry((false, k)).or_default() += g.conj() * x;
                        }
                    }
                }
                for ((is_given, k), o) in overlaps {
                    if o.norm() < 1e-15 {
                        continue;
                    }
                    if is_given {
                        for (row, g) in columns[k].as_ref().unwrap() {
                            *proj.entry(*row).or_default() += o * g.to_complex();
                        }
                    } else {
                        for &(row, g) in &made[k] {
                            *proj.entry(row).or_default() += o * g;
                        }
                    }
                }
                for (row, p) in proj {
                    *v.entry(row).or_default() -= p;
                }
                v.retain(|_, x| x.norm() > 1e-15);
            }
            let norm = sparse_norm(&v);
            if norm < 1e-8 {
                continue;
            }
            let col: Column = v.into_iter().map(|(row, x)| (row, x / norm)).collect();
            let k = made.len();
            for &(row, x) in &col {
                made_by_row.entry(row).or_default().push((k, x));
            }
            made.push(col);
        }
        if made.len() != free_in_supp.len() {
            return Err(Error::MalformedPlan("orthonormal completion ran out of directions".into()));
        }
        for (c, col) in free_in_supp.into_iter().zip(made) {
            let exact_unit = col.len() == 1 && (col[0].1 - 1.0).norm() < 1e-14;
            columns[c] = Some(if exact_unit {
                vec![(col[0].0, Scalar::one())]
            } else {
                col.into_iter().map(|(row, x)| (row, Scalar::Float(x))).collect()
            });
        }
    }
    SparseUnitary::new(dim, columns.into_iter().map(Option::unwrap).collect())
}

impl CircuitPlan {
    /// Follows a computational basis input through a plan whose unitaries are all permutations,
    /// returning the code of every output register.
    pub fn permute_basis(&self, input_index: usize) -> Result<Vec<usize>> {
        let mut codes: HashMap<RegId, usize> = HashMap::new();
        let mut rest = input_index;
        for &r in self.inputs.iter().rev() {
            let w = self.registers[r].width;
            codes.insert(r, rest & ((1usize << w) - 1));
            rest >>= w;
        }
        if rest != 0 {
            return Err(Error::InvalidArgument(format!("input index {input_index} exceeds the input width")));
        }
        for step in &self.steps {
            match step {
                Step::Alloc(r) => {
                    codes.insert(*r, 0);
                }
                Step::Release(r) => {
                    if codes.remove(r) != Some(0) {
                        return Err(Error::Leakage { register: self.registers[*r].name.clone(), leakage: 1.0 });
                    }
                }
                Step::Unitary(u) => {
                    let mut idx = 0usize;
                    for r in &u.inputs {
                        idx = (idx << self.registers[*r].width) | codes.remove(r).unwrap_or(0);
                    }
                    let col = u.matrix.column(idx);
                    if col.len() != 1 || (col[0].1.to_complex() - 1.0).norm() > 1e-12 {
                        return Err(Error::Unsupported(format!("step {} is not a permutation on this input", u.label)));
                    }
                    let mut out = col[0].0;
                    for r in u.outputs.iter().rev() {
                        let w = self.registers[*r].width;
                        codes.insert(*r, out & ((1usize << w) - 1));
                        out >>= w;
                    }
                }
            }
        }
        Ok(self.outputs.iter().map(|r| codes[r]).collect())
    }
}

/// Completion when the given columns span exactly the rows they touch: free columns are sent to
/// untouched rows inside the same component of the graph that links every given column to its rows.
fn close_components(
    dim: usize,
    mut columns: Vec<Option<Vec<(usize, Scalar)>>>,
    supp: &BTreeSet<usize>,
) -> SparseUnitary {
    let mut uf = petgraph::unionfind::UnionFind::<usize>::new(dim);
    for (c, col) in columns.iter().enumerate() {
        if let Some(col) = col {
            for (r, _) in col {
                uf.union(c, *r);
            }
        }
    }
    let mut free: BTreeMap<usize, (Vec<usize>, Vec<usize>)> = BTreeMap::new();
    for k in 0..dim {
        let e = free.entry(uf.find(k)).or_default();
        if columns[k].is_none() {
            e.0.push(k);
        }
        if !supp.contains(&k) {
            e.1.push(k);
        }
    }
    for (cols, rows) in free.into_values() {
        debug_assert_eq!(cols.len(), rows.len());
        // Send as many columns as possible to a row at or below the diagonal: each column in
        // increasing order takes the smallest unused row not above it.
        let mut unused: BTreeSet<usize> = rows.into_iter().collect();
        let mut pending = Vec::new();
        for c in cols {
            match unused.range(c..).next().copied() {
                Some(r) => {
                    unused.remove(&r);
                    columns[c] = Some(vec![(r, Scalar::one())]);
                }
                None => pending.push(c),
            }
        }
        for (c, r) in pending.into_iter().zip(unused) {
            columns[c] = Some(vec![(r, Scalar::one())]);
        }
    }
    let columns = columns
        .into_iter()
        .map(|c| {
            let mut c = c.expect("every column filled");
            c.sort_by_key(|e| e.0);
            c
        })
        .collect();
    SparseUnitary { dim, columns }
}
