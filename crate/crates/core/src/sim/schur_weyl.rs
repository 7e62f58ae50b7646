use std::collections::BTreeMap;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::pqc::{enumerate_labellings, pqc_state, PqcLabels, PqcTree};

/// Largest qubit count for dense Schur-Weyl computations.
pub const SCHUR_WEYL_CAP: usize = 10;
const BLOCK_TOL: f64 = 1e-10;
const UNITARY_TOL: f64 = 1e-10;

fn check_n(n: usize) -> Result<()> {
    if n > SCHUR_WEYL_CAP {
        return Err(Error::CapExceeded(format!("{n} qubits exceeds the dense cap of {SCHUR_WEYL_CAP}")));
    }
    Ok(())
}

/// The permutation that moves qubit k to position sigma[k] (0-based, qubit 0 most significant).
pub fn perm_rep(sigma: &[usize]) -> Result<DMatrix<Complex64>> {
    let n = sigma.len();
    check_n(n)?;
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || std::mem::replace(&mut seen[s], true) {
            return Err(Error::InvalidArgument(format!("{sigma:?} is not a permutation")));
        }
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for x in 0..dim {
        let mut y = 0usize;
        for (k, &s) in sigma.iter().enumerate() {
            let bit = (x >> (n - 1 - k)) & 1;
            y |= bit << (n - 1 - s);
        }
        m[(y, x)] = Complex64::new(1.0, 0.0);
    }
    Ok(m)
}

/// u applied to every one of n qubits.
pub fn local_rep(u: &Matrix2<Complex64>, n: usize) -> Result<DMatrix<Complex64>> {
    check_n(n)?;
    let dev = (u.adjoint() * u - Matrix2::identity()).norm();
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let u = DMatrix::from_iterator(2, 2, u.iter().copied());
    let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for _ in 0..n {
        m = m.kronecker(&u);
    }
    Ok(m)
}

/// Rows are the PQC states of the tree, in labelling order.
pub fn pqc_unitary(tree: &PqcTree) -> Result<(Vec<PqcLabels>, DMatrix<Complex64>)> {
    check_n(tree.n())?;
    let labels = enumerate_labellings(tree);
    let dim = 1usize << tree.n();
    let mut u = DMatrix::zeros(dim, dim);
    for (k, l) in labels.iter().enumerate() {
        let psi = pqc_state(tree, l)?.dense_state()?;
        for (x, a) in psi.into_iter().enumerate() {
            u[(k, x)] = a.conj();
        }
    }
    Ok((labels, u))
}

/// Qubit 2x2 unitary [[a, -b*], [b, a*]].
pub fn su2(a: Complex64, b: Complex64) -> Matrix2<Complex64> {
    Matrix2::new(a, -b.conj(), b, a.conj())
}

fn generic_pair() -> [Matrix2<Complex64>; 2] {
    [
        su2(Complex64::new(0.36, 0.48), Complex64::new(0.64, 0.48)),
        su2(Complex64::new(0.0, 0.6), Complex64::new(0.8, 0.0)),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// All of S_n, generated by adjacent transpositions.
    Permutations,
    /// Local unitaries u^{(x)n}, generated by a fixed generic pair.
    Local,
    /// Permutations of a qubit subset (1-based), generated by transpositions of consecutive members.
    Subgroup(Vec<usize>),
}

#[derive(Debug, Clone)]
pub struct BlockStructure {
    pub labels: Vec<PqcLabels>,
    /// Index sets in the labelling order, each sorted, ordered by their first index.
    pub blocks: Vec<Vec<usize>>,
}

impl BlockStructure {
    /// Block size -> number of blocks of that size.
    pub fn census(&self) -> BTreeMap<usize, usize> {
        let mut c = BTreeMap::new();
        for b in &self.blocks {
            *c.entry(b.len()).or_insert(0) += 1;
        }
        c
    }
}

fn generators(n: usize, family: &Family) -> Result<Vec<DMatrix<Complex64>>> {
    let transposition = |a: usize, b: usize| {
        let mut s: Vec<usize> = (0..n).collect();
        s.swap(a, b);
        perm_rep(&s)
    };
    match family {
        Family::Permutations => (0..n - 1).map(|k| transposition(k, k + 1)).collect(),
        Family::Local => generic_pair().iter().map(|u| local_rep(u, n)).collect(),
        Family::Subgroup(subset) => {
            let mut s = subset.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != subset.len() || s.iter().any(|&q| q == 0 || q > n) {
                return Err(Error::InvalidArgument(format!("{subset:?} is not a subset of 1..={n}")));
            }
            s.windows(2).map(|w| transposition(w[0] - 1, w[1] - 1)).collect()
        }
    }
}

/// Connected components of the support of U G U^dagger over the generators G of the family.
pub fn block_structure(tree: &PqcTree, family: &Family) -> Result<BlockStructure> {
    let (labels, u) = pqc_unitary(tree)?;
    let dim = labels.len();
    let mut uf = UnionFind::<usize>::new(dim);
    for g in generators(tree.n(), family)? {
        let conj = &u * g * u.adjoint();
        for r in 0..dim {
            for c in 0..dim {
                if conj[(r, c)].norm() > BLOCK_TOL {
                    uf.union(r, c);
                }
            }
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for k in 0..dim {
        by_root.entry(uf.find(k)).or_default().push(k);
    }
    let mut blocks: Vec<Vec<usize>> = by_root.into_values().collect();
    blocks.sort_by_key(|b| b[0]);
    Ok(BlockStructure { labels, blocks })
}

/// The states sharing all labels but M, listed with M ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct IrrepBlock {
    pub js: Vec<HalfInt>,
    pub indices: Vec<usize>,
}

impl IrrepBlock {
    pub fn total_j(&self) -> HalfInt {
        *self.js.last().expect("nonempty labels")
    }
}

pub fn u2_irrep_blocks(tree: &PqcTree) -> Vec<IrrepBlock> {
    let mut groups: BTreeMap<Vec<i64>, IrrepBlock> = BTreeMap::new();
    let labels = enumerate_labellings(tree);
    for (k, l) in labels.iter().enumerate() {
        let key: Vec<i64> = l.js.iter().map(|j| -j.doubled()).collect();
        groups.entry(key).or_insert_with(|| IrrepBlock { js: l.js.clone(), indices: vec![] }).indices.push(k);
    }
    let mut out: Vec<IrrepBlock> = groups.into_values().collect();
    for b in &mut out {
        b.indices.sort_by_key(|&k| labels[k].m);
    }
    out
}

/// The block of U_pqc u^{(x)n} U_pqc^dagger on one irrep.
pub fn u2_irrep_block(tree: &PqcTree, block: &IrrepBlock, u: &Matrix2<Complex64>) -> Result<DMatrix<Complex64>> {
    let (_, w) = pqc_unitary(tree)?;
    let full = &w * local_rep(u, tree.n())? * w.adjoint();
    let k = block.indices.len();
    Ok(DMatrix::from_fn(k, k, |r, c| full[(block.indices[r], block.indices[c])]))
}

fn factorial(k: i64) -> f64 {
    (1..=k).map(|v| v as f64).product()
}

/// Spin-j representation of [[a, -b*], [b, a*]] in the basis M = -j, ..., j.
pub fn u2_irrep_closed_form(j: HalfInt, a: Complex64, b: Complex64) -> Result<DMatrix<Complex64>> {
    let dev = (a.norm_sqr() + b.norm_sqr() - 1.0).abs();
    if dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    if j.doubled() < 0 {
        return Err(Error::InvalidArgument(format!("negative spin {j}")));
    }
    let d = j.multiplicity() as usize;
    let jj = j.doubled();
    // Work with integers J+M and J-M.
    Ok(DMatrix::from_fn(d, d, |r, c| {
        let (p_out, p_in) = (r as i64, c as i64);
        let (q_out, q_in) = (jj - p_out, jj - p_in);
        let lo = 0.max(p_in - p_out);
        let hi = p_in.min(q_out);
        let mut sum = Complex64::default();
        for k in lo..=hi {
            let binom = factorial(p_in) / (factorial(k) * factorial(p_in - k)) * factorial(q_in)
                / (factorial(p_out - p_in + k) * factorial(q_in - (p_out - p_in + k)));
            sum += binom
                * a.conj().powi((p_in - k) as i32)
                * (-b.conj()).powi(k as i32)
                * b.powi((p_out - p_in + k) as i32)
                * a.powi((q_out - k) as i32);
        }
        let norm = (factorial(p_out) * factorial(q_out) / (factorial(p_in) * factorial(q_in))).sqrt();
        sum * norm
    }))
}
