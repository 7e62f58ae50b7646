//! Binary coupling trees over qubits, their labellings and the operators they diagonalize.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::coupling::{CgProvider, Child, CouplingProvider, CouplingTree, Leaf, Vertex};
use crate::error::{Error, Result};
use crate::halfint::{valid_pair, HalfInt};

/// Largest qubit count for which spin operators are materialized.
pub const SPIN_OPERATOR_CAP: usize = 14;

/// A branch of a PQC vertex: a single qubit or an earlier vertex (both 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Qubit(usize),
    Vertex(usize),
}

impl Branch {
    /// The signed tag: `-q` for qubit q, `i` for vertex i.
    pub fn tag(self) -> i64 {
        match self {
            Branch::Qubit(q) => -(q as i64),
            Branch::Vertex(i) => i as i64,
        }
    }

    pub fn from_tag(tag: i64) -> Result<Self> {
        match tag {
            t if t < 0 => Ok(Branch::Qubit((-t) as usize)),
            t if t > 0 => Ok(Branch::Vertex(t as usize)),
            _ => Err(Error::InvalidArgument("branch tag 0 is meaningless".into())),
        }
    }
}

/// Vertices v_1, ..., v_{n-1} as nested qubit subsets with left and right branches.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PqcTreeSpec", into = "PqcTreeSpec")]
pub struct PqcTree {
    n: usize,
    subsets: Vec<Vec<usize>>,
    left: Vec<Branch>,
    right: Vec<Branch>,
}

/// JSON form: `{"n": 5, "subsets": [[1,2],[1,2,3],[4,5],[1,2,3,4,5]]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PqcTreeSpec {
    pub n: usize,
    pub subsets: Vec<Vec<usize>>,
}

impl TryFrom<PqcTreeSpec> for PqcTree {
    type Error = Error;
    fn try_from(s: PqcTreeSpec) -> Result<Self> {
        PqcTree::from_subsets(s.n, s.subsets)
    }
}

impl From<PqcTree> for PqcTreeSpec {
    fn from(t: PqcTree) -> Self {
        PqcTreeSpec { n: t.n, subsets: t.subsets }
    }
}

impl PqcTree {
    pub fn from_subsets(n: usize, subsets: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if n < 2 {
            return bad(format!("a PQC tree needs at least 2 qubits, got {n}"));
        }
        if subsets.len() != n - 1 {
            return bad(format!("expected {} vertex subsets, got {}", n - 1, subsets.len()));
        }
        let sets: Vec<BTreeSet<usize>> = subsets.iter().map(|s| s.iter().copied().collect()).collect();
        for (i, (s, raw)) in sets.iter().zip(&subsets).enumerate() {
            if s.len() != raw.len() || s.len() < 2 || s.iter().any(|&q| q == 0 || q > n) {
                return bad(format!("subset v_{} = {raw:?} is not a set of at least two qubits in 1..={n}", i + 1));
            }
        }
        if sets[n - 2].len() != n {
            return bad("the last subset must contain every qubit".into());
        }
        for i in 0..sets.len() {
            for j in 0..sets.len() {
                if i == j {
                    continue;
                }
                let (a, b) = (&sets[i], &sets[j]);
                if a == b {
                    return bad(format!("v_{} and v_{} coincide", i + 1, j + 1));
                }
                if a.is_subset(b) && i > j {
                    return bad(format!("v_{} is inside v_{} but numbered later", i + 1, j + 1));
                }
                if !a.is_subset(b) && !b.is_subset(a) && !a.is_disjoint(b) {
                    return bad(format!("v_{} and v_{} overlap without nesting", i + 1, j + 1));
                }
            }
        }
        let mut left = Vec::with_capacity(n - 1);
        let mut right = Vec::with_capacity(n - 1);
        for (i, s) in sets.iter().enumerate() {
            // Maximal earlier subsets inside v_i, then the qubits they leave uncovered.
            let mut branches: Vec<(usize, Branch)> = Vec::new();
            let mut covered = BTreeSet::new();
            for k in (0..i).rev() {
                if sets[k].is_subset(s) && sets[k].is_disjoint(&covered) {
                    covered.extend(sets[k].iter().copied());
                    branches.push((*sets[k].iter().next().unwrap(), Branch::Vertex(k + 1)));
                }
            }
            for &q in s.difference(&covered) {
                branches.push((q, Branch::Qubit(q)));
            }
            if branches.len() != 2 {
                return bad(format!("v_{} splits into {} branches instead of 2", i + 1, branches.len()));
            }
            branches.sort();
            left.push(branches[0].1);
            right.push(branches[1].1);
        }
        let subsets = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        Ok(PqcTree { n, subsets, left, right })
    }

    /// Builds the tree from signed child tags l(i), r(i).
    pub fn from_children(n: usize, left: &[i64], right: &[i64]) -> Result<Self> {
        if left.len() != n.saturating_sub(1) || right.len() != left.len() {
            return Err(Error::InvalidArgument("need n-1 left and right tags".into()));
        }
        let mut subsets: Vec<Vec<usize>> = Vec::with_capacity(left.len());
        for i in 0..left.len() {
            let mut s = Vec::new();
            for tag in [left[i], right[i]] {
                match Branch::from_tag(tag)? {
                    Branch::Qubit(q) => s.push(q),
                    Branch::Vertex(k) if k >= 1 && k <= i => s.extend(subsets[k - 1].iter().copied()),
                    Branch::Vertex(k) => {
                        return Err(Error::InvalidArgument(format!("v_{} refers to later vertex {k}", i + 1)))
                    }
                }
            }
            s.sort_unstable();
            subsets.push(s);
        }
        Self::from_subsets(n, subsets)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// v_i for i = 1, ..., n-1 (stored at index i-1).
    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    pub fn subset(&self, i: usize) -> &[usize] {
        &self.subsets[i - 1]
    }

    /// l(i) and r(i) for a 1-based vertex index.
    pub fn branches(&self, i: usize) -> (Branch, Branch) {
        (self.left[i - 1], self.right[i - 1])
    }

    pub fn is_sequential(&self) -> bool {
        self.subsets.iter().enumerate().all(|(i, s)| s.len() == i + 2 && s.iter().copied().eq(1..=i + 2))
    }
}

impl fmt::Display for PqcTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .subsets
            .iter()
            .map(|s| format!("{{{}}}", s.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The sequentially coupled tree v_i = {1, ..., i+1}.
pub fn schur_tree(n: usize) -> Result<PqcTree> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("schur tree needs n >= 2, got {n}")));
    }
    PqcTree::from_subsets(n, (1..n).map(|i| (1..=i + 1).collect()).collect())
}

/// Recursive halving, larger half on the left.
pub fn balanced_tree(n: usize) -> Result<PqcTree> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("tree needs n >= 2, got {n}")));
    }
    fn build(lo: usize, hi: usize, out: &mut Vec<Vec<usize>>) {
        if hi - lo < 2 {
            return;
        }
        let mid = lo + (hi - lo).div_ceil(2);
        build(lo, mid, out);
        build(mid, hi, out);
        out.push((lo..hi).collect());
    }
    let mut subsets = Vec::new();
    build(1, n + 1, &mut subsets);
    PqcTree::from_subsets(n, subsets)
}

/// A tree made by merging uniformly chosen pairs of current roots.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<PqcTree> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("tree needs n >= 2, got {n}")));
    }
    let mut roots: Vec<Vec<usize>> = (1..=n).map(|q| vec![q]).collect();
    let mut subsets = Vec::new();
    while roots.len() > 1 {
        let a = rng.random_range(0..roots.len());
        let mut merged = roots.swap_remove(a);
        let b = rng.random_range(0..roots.len());
        merged.extend(roots.swap_remove(b));
        merged.sort_unstable();
        subsets.push(merged.clone());
        roots.push(merged);
    }
    PqcTree::from_subsets(n, subsets)
}

/// Every binary hierarchy over n labelled qubits; (2n-3)!! trees.
pub fn all_trees(n: usize) -> Result<Vec<PqcTree>> {
    if !(2..=8).contains(&n) {
        return Err(Error::InvalidArgument(format!("tree enumeration supports 2 <= n <= 8, got {n}")));
    }
    fn hierarchies(set: &[usize]) -> Vec<Vec<Vec<usize>>> {
        if set.len() == 1 {
            return vec![vec![]];
        }
        let first = set[0];
        let rest = &set[1..];
        let mut out = Vec::new();
        for mask in 0..(1u32 << rest.len()) {
            let mut a = vec![first];
            let mut b = Vec::new();
            for (k, &q) in rest.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    a.push(q);
                } else {
                    b.push(q);
                }
            }
            if b.is_empty() {
                continue;
            }
            for ha in hierarchies(&a) {
                for hb in hierarchies(&b) {
                    let mut h = ha.clone();
                    h.extend(hb.iter().cloned());
                    h.push(set.to_vec());
                    out.push(h);
                }
            }
        }
        out
    }
    let full: Vec<usize> = (1..=n).collect();
    hierarchies(&full).into_iter().map(|h| PqcTree::from_subsets(n, h)).collect()
}

/// Eigenvalue labels: j_i for every vertex (the last one is J) and the root's M.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PqcLabels {
    pub js: Vec<HalfInt>,
    pub m: HalfInt,
}

impl PqcLabels {
    pub fn total_j(&self) -> HalfInt {
        *self.js.last().expect("labels carry at least the root j")
    }

    /// j-value of a branch, with 1/2 for a single qubit.
    pub fn branch_j(&self, b: Branch) -> HalfInt {
        match b {
            Branch::Qubit(_) => HalfInt::HALF,
            Branch::Vertex(i) => self.js[i - 1],
        }
    }

    fn sort_key(&self) -> Vec<i64> {
        self.js.iter().chain(std::iter::once(&self.m)).map(|h| -h.doubled()).collect()
    }
}

impl fmt::Display for PqcLabels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let js: Vec<String> = self.js.iter().map(|j| j.to_string()).collect();
        write!(f, "(j = [{}], M = {})", js.join(", "), self.m)
    }
}

fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.doubled(), b.doubled(), c.doubled());
    a >= (b - c).abs() && a <= b + c && (a + b + c) % 2 == 0
}

/// Possible j-values at vertex i for each assignment of earlier vertices, larger first.
pub fn vertex_j_range(tree: &PqcTree, i: usize, js: &[HalfInt]) -> Vec<HalfInt> {
    let (l, r) = tree.branches(i);
    let get = |b: Branch| match b {
        Branch::Qubit(_) => HalfInt::HALF,
        Branch::Vertex(k) => js[k - 1],
    };
    let (a, b) = (get(l), get(r));
    ((a - b).abs().doubled()..=(a + b).doubled()).rev().step_by(2).map(HalfInt::from_doubled).collect()
}

/// Every labelling, sorted by (j_1, ..., j_{n-2}, J, M) with larger values first.
pub fn enumerate_labellings(tree: &PqcTree) -> Vec<PqcLabels> {
    let mut out = Vec::with_capacity(1 << tree.n().min(30));
    let mut js = Vec::with_capacity(tree.n() - 1);
    fn rec(tree: &PqcTree, js: &mut Vec<HalfInt>, out: &mut Vec<PqcLabels>) {
        let i = js.len() + 1;
        if i == tree.n() {
            let j = *js.last().unwrap();
            for m in j.m_values().rev() {
                out.push(PqcLabels { js: js.clone(), m });
            }
            return;
        }
        for j in vertex_j_range(tree, i, js) {
            js.push(j);
            rec(tree, js, out);
            js.pop();
        }
    }
    rec(tree, &mut js, &mut out);
    debug_assert!(out.windows(2).all(|w| w[0].sort_key() < w[1].sort_key()));
    out
}

pub fn check_labels(tree: &PqcTree, labels: &PqcLabels) -> Result<()> {
    if labels.js.len() != tree.n() - 1 {
        return Err(Error::InvalidArgument(format!("expected {} j-labels, got {}", tree.n() - 1, labels.js.len())));
    }
    for i in 1..tree.n() {
        let (l, r) = tree.branches(i);
        let (a, b, c) = (labels.branch_j(l), labels.branch_j(r), labels.js[i - 1]);
        if c.doubled() < 0 || !triangle(c, a, b) {
            return Err(Error::InvalidArgument(format!("j_{i} = {c} cannot couple {a} and {b}")));
        }
    }
    if !valid_pair(labels.total_j(), labels.m) {
        return Err(Error::InvalidArgument(format!("M = {} is invalid for J = {}", labels.m, labels.total_j())));
    }
    Ok(())
}

/// The coupled state of a labelling, with a Clebsch-Gordan vertex per subset.
pub fn pqc_state(tree: &PqcTree, labels: &PqcLabels) -> Result<CouplingTree> {
    check_labels(tree, labels)?;
    let cg: Arc<dyn CouplingProvider> = Arc::new(CgProvider);
    let child = |b: Branch| match b {
        Branch::Qubit(q) => Child::Leaf(q - 1),
        Branch::Vertex(k) => Child::Vertex(k - 1),
    };
    let vertices = (1..tree.n())
        .map(|i| {
            let (l, r) = tree.branches(i);
            Vertex::new(cg.clone(), labels.js[i - 1], vec![child(l), child(r)])
        })
        .collect();
    let leaves = vec![Leaf::qubit(); tree.n()];
    CouplingTree::new(leaves, vertices, tree.n() - 2, labels.m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinKind {
    /// S^2 of the subset.
    Total,
    /// Z of the subset.
    Z,
}

/// An integer matrix divided by `scale`; Hermitian (real symmetric) by construction.
///
/// Qubit 1 is the most significant bit of the basis index and bit value 1 is m = +1/2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpinOperator {
    n: usize,
    scale: i64,
    columns: Vec<Vec<(usize, i64)>>,
}

/// S^2 (scaled by 4) or Z (scaled by 2) of a qubit subset.
pub fn spin_operator(subset: &[usize], kind: SpinKind, n: usize) -> Result<SpinOperator> {
    if n > SPIN_OPERATOR_CAP {
        return Err(Error::CapExceeded(format!("spin operators limited to {SPIN_OPERATOR_CAP} qubits")));
    }
    let set: BTreeSet<usize> = subset.iter().copied().collect();
    if set.is_empty() || set.len() != subset.len() || set.iter().any(|&q| q == 0 || q > n) {
        return Err(Error::InvalidArgument(format!("bad qubit subset {subset:?} for n = {n}")));
    }
    let bit = |q: usize| n - q;
    let qs: Vec<usize> = set.into_iter().collect();
    let dim = 1usize << n;
    let mut columns = Vec::with_capacity(dim);
    for x in 0..dim {
        let mut col: Vec<(usize, i64)> = Vec::new();
        match kind {
            SpinKind::Z => {
                let d: i64 = qs.iter().map(|&q| if x >> bit(q) & 1 == 1 { 1 } else { -1 }).sum();
                if d != 0 {
                    col.push((x, d));
                }
            }
            SpinKind::Total => {
                // 4 S^2 = 3|a| + sum over ordered pairs of (2 SWAP - 1).
                let k = qs.len() as i64;
                let mut diag = 3 * k - k * (k - 1);
                for (a, &p) in qs.iter().enumerate() {
                    for &q in &qs[a + 1..] {
                        let (bp, bq) = (x >> bit(p) & 1, x >> bit(q) & 1);
                        if bp == bq {
                            diag += 4;
                        } else {
                            col.push((x ^ (1 << bit(p)) ^ (1 << bit(q)), 4));
                        }
                    }
                }
                if diag != 0 {
                    col.push((x, diag));
                }
                col.sort_unstable();
            }
        }
        columns.push(col);
    }
    let scale = match kind {
        SpinKind::Total => 4,
        SpinKind::Z => 2,
    };
    Ok(SpinOperator { n, scale, columns })
}

impl SpinOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> i64 {
        self.scale
    }

    /// Integer entry (row, col) of `scale * operator`.
    pub fn scaled_entry(&self, row: usize, col: usize) -> i64 {
        self.columns[col].iter().find(|e| e.0 == row).map(|e| e.1).unwrap_or(0)
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        let s = self.scale as f64;
        for (x, col) in self.columns.iter().enumerate() {
            if v[x] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for &(y, a) in col {
                out[y] += v[x] * (a as f64 / s);
            }
        }
        out
    }

    fn scaled_product(&self, other: &SpinOperator) -> Vec<std::collections::BTreeMap<usize, i64>> {
        // (self * other) column x = self applied to other's column x.
        other
            .columns
            .iter()
            .map(|col| {
                let mut acc = std::collections::BTreeMap::new();
                for &(k, b) in col {
                    for &(y, a) in &self.columns[k] {
                        *acc.entry(y).or_insert(0) += a * b;
                    }
                }
                acc.retain(|_, v| *v != 0);
                acc
            })
            .collect()
    }

    /// Whether the two operators commute, decided in exact integer arithmetic.
    pub fn commutes_with(&self, other: &SpinOperator) -> bool {
        self.n == other.n && self.scaled_product(other) == other.scaled_product(self)
    }

    pub fn is_symmetric(&self) -> bool {
        self.columns.iter().enumerate().all(|(x, col)| col.iter().all(|&(y, a)| self.scaled_entry(x, y) == a))
    }
}

/// Bits recording whether each j along a sequential path was raised (1) or lowered (0).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct YamanouchiCode(pub Vec<bool>);

impl fmt::Display for YamanouchiCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            write!(f, "{}", b as u8)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for YamanouchiCode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::InvalidArgument(format!("`{c}` is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(YamanouchiCode)
    }
}

/// Encodes j_1, j_2, ... (starting after the implicit j = 1/2 of one qubit).
pub fn yamanouchi_encode(js: &[HalfInt]) -> Result<YamanouchiCode> {
    let mut prev = HalfInt::HALF;
    let mut bits = Vec::with_capacity(js.len());
    for (i, &j) in js.iter().enumerate() {
        if j.doubled() < 0 {
            return Err(Error::InvalidArgument(format!("j_{} = {j} is negative", i + 1)));
        }
        match (j - prev).doubled() {
            1 => bits.push(true),
            -1 => bits.push(false),
            _ => return Err(Error::InvalidArgument(format!("j_{} = {j} does not follow {prev} by 1/2", i + 1))),
        }
        prev = j;
    }
    Ok(YamanouchiCode(bits))
}

pub fn yamanouchi_decode(code: &YamanouchiCode) -> Result<Vec<HalfInt>> {
    let mut j = HalfInt::HALF;
    let mut out = Vec::with_capacity(code.0.len());
    for (i, &raise) in code.0.iter().enumerate() {
        j = if raise { j + HalfInt::HALF } else { j - HalfInt::HALF };
        if j.doubled() < 0 {
            return Err(Error::InvalidArgument(format!("bit {} lowers j below zero", i + 1)));
        }
        out.push(j);
    }
    Ok(out)
}
