use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::RngCore;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::scalar::Scalar;

use super::provider::CouplingProvider;

/// Largest leaf-product dimension `dense_state` will expand by default.
pub const DEFAULT_DENSE_CAP: usize = 1 << 24;
/// Largest support a provider may enumerate for one vertex.
pub const DEFAULT_SUPPORT_CAP: usize = 1 << 16;

/// Per-leaf m-values.
pub type BasisString = Vec<HalfInt>;

/// A base qudit: its fixed j-label and its ordered basis of m-values (code k is `ms[k]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Leaf {
    pub j: HalfInt,
    pub ms: Vec<HalfInt>,
}

impl Leaf {
    /// A spin-j qudit with basis m = -j, ..., j in that order.
    pub fn spin(j: HalfInt) -> Self {
        Leaf { j, ms: j.m_values().collect() }
    }

    /// A qubit: code 0 is m = -1/2, code 1 is m = +1/2.
    pub fn qubit() -> Self {
        Leaf::spin(HalfInt::HALF)
    }

    pub fn dim(&self) -> usize {
        self.ms.len()
    }

    pub fn code(&self, m: HalfInt) -> Option<usize> {
        self.ms.iter().position(|&x| x == m)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Child {
    Leaf(usize),
    Vertex(usize),
}

#[derive(Debug, Clone)]
pub struct Vertex {
    pub provider: Arc<dyn CouplingProvider>,
    pub j: HalfInt,
    pub children: Vec<Child>,
}

impl Vertex {
    pub fn new(provider: Arc<dyn CouplingProvider>, j: HalfInt, children: Vec<Child>) -> Self {
        Vertex { provider, j, children }
    }
}

/// A coupled state: leaves joined through provider vertices up to a root with fixed (J, M).
#[derive(Debug, Clone)]
pub struct CouplingTree {
    leaves: Vec<Leaf>,
    vertices: Vec<Vertex>,
    root: usize,
    root_m: HalfInt,
    post_order: Vec<usize>,
    parent: Vec<Option<usize>>,
    reachable: Vec<Vec<HalfInt>>,
}

impl CouplingTree {
    /// Builds and checks a tree. The root's output label is `vertices[root].j`.
    pub fn new(leaves: Vec<Leaf>, vertices: Vec<Vertex>, root: usize, root_m: HalfInt) -> Result<Self> {
        Self::with_support_cap(leaves, vertices, root, root_m, DEFAULT_SUPPORT_CAP)
    }

    pub fn with_support_cap(
        leaves: Vec<Leaf>,
        vertices: Vec<Vertex>,
        root: usize,
        root_m: HalfInt,
        support_cap: usize,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if leaves.is_empty() || vertices.is_empty() {
            return bad("a coupling tree needs at least one vertex and one leaf".into());
        }
        if root >= vertices.len() {
            return bad(format!("root index {root} out of range"));
        }
        for (i, l) in leaves.iter().enumerate() {
            if l.ms.is_empty() || l.j.doubled() < 0 {
                return bad(format!("leaf {i} has an empty basis or negative j"));
            }
            if l.ms.iter().collect::<BTreeSet<_>>().len() != l.ms.len() {
                return bad(format!("leaf {i} repeats an m-value"));
            }
        }
        let mut leaf_seen = vec![false; leaves.len()];
        let mut parent = vec![None; vertices.len()];
        for (v, vert) in vertices.iter().enumerate() {
            if vert.children.len() != vert.provider.arity() {
                return bad(format!(
                    "vertex {v} has {} children but provider {} has arity {}",
                    vert.children.len(),
                    vert.provider.name(),
                    vert.provider.arity()
                ));
            }
            for c in &vert.children {
                match *c {
                    Child::Leaf(l) => {
                        if l >= leaves.len() || std::mem::replace(&mut leaf_seen[l], true) {
                            return bad(format!("leaf {l} missing or used twice"));
                        }
                    }
                    Child::Vertex(w) => {
                        if w >= vertices.len() || w == root || parent[w].is_some() {
                            return bad(format!("vertex {w} missing, is the root, or has two parents"));
                        }
                        parent[w] = Some(v);
                    }
                }
            }
        }
        if leaf_seen.iter().any(|s| !s) {
            return bad("every leaf must belong to exactly one vertex".into());
        }
        // Post-order from the root; cycles or orphans leave vertices unvisited.
        let mut post_order = Vec::with_capacity(vertices.len());
        let mut stack = vec![(root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                post_order.push(v);
                continue;
            }
            stack.push((v, true));
            for c in vertices[v].children.iter().rev() {
                if let Child::Vertex(w) = *c {
                    stack.push((w, false));
                }
            }
        }
        if post_order.len() != vertices.len() || post_order.iter().collect::<BTreeSet<_>>().len() != vertices.len() {
            return bad("vertex graph is not a tree rooted at the given root".into());
        }

        let mut tree = CouplingTree { leaves, vertices, root, root_m, post_order, parent, reachable: Vec::new() };
        tree.reachable = tree.compute_reachable(support_cap)?;
        Ok(tree)
    }

    fn compute_reachable(&self, cap: usize) -> Result<Vec<Vec<HalfInt>>> {
        let mut sets: Vec<BTreeSet<HalfInt>> = vec![BTreeSet::new(); self.vertices.len()];
        let root = &self.vertices[self.root];
        if !root.provider.admits(root.j, self.root_m, &self.child_js(self.root)) {
            return Err(Error::InvalidArgument(format!(
                "root provider {} does not admit (J, M) = ({}, {})",
                root.provider.name(),
                root.j,
                self.root_m
            )));
        }
        sets[self.root].insert(self.root_m);
        for &v in self.post_order.iter().rev() {
            let vert = &self.vertices[v];
            let js = self.child_js(v);
            let mut any = false;
            for &m in &sets[v].clone() {
                if !vert.provider.admits(vert.j, m, &js) {
                    continue;
                }
                for tuple in self.support_of(v, m, cap)? {
                    any = true;
                    for (c, cm) in vert.children.iter().zip(&tuple) {
                        if let Child::Vertex(w) = *c {
                            sets[w].insert(*cm);
                        }
                    }
                }
            }
            if !any {
                return Err(Error::InvalidArgument(format!(
                    "vertex {v} ({} with output j = {}) has no nonzero coefficient for its children",
                    vert.provider.name(),
                    vert.j
                )));
            }
        }
        // Descending order, matching register encodings elsewhere.
        Ok(sets.into_iter().map(|s| s.into_iter().rev().collect()).collect())
    }

    /// Support tuples of vertex `v` at output `m` with nonzero coefficients, capped.
    fn support_of(&self, v: usize, m: HalfInt, cap: usize) -> Result<Vec<Vec<HalfInt>>> {
        let vert = &self.vertices[v];
        let js = self.child_js(v);
        let mut out = Vec::new();
        for (count, tuple) in vert.provider.support(vert.j, m, &js).enumerate() {
            if count >= cap {
                return Err(Error::SupportOverflow { cap, labels: format!("vertex {v}, m = {m}") });
            }
            if !vert.provider.value(vert.j, m, &self.pairs(&js, &tuple)).is_zero() {
                out.push(tuple);
            }
        }
        Ok(out)
    }

    fn pairs(&self, js: &[HalfInt], ms: &[HalfInt]) -> Vec<(HalfInt, HalfInt)> {
        js.iter().copied().zip(ms.iter().copied()).collect()
    }

    pub fn child_j(&self, c: Child) -> HalfInt {
        match c {
            Child::Leaf(l) => self.leaves[l].j,
            Child::Vertex(w) => self.vertices[w].j,
        }
    }

    pub fn child_js(&self, v: usize) -> Vec<HalfInt> {
        self.vertices[v].children.iter().map(|&c| self.child_j(c)).collect()
    }

    pub fn leaves(&self) -> &[Leaf] {
        &self.leaves
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn root_j(&self) -> HalfInt {
        self.vertices[self.root].j
    }

    pub fn root_m(&self) -> HalfInt {
        self.root_m
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    /// Vertices with every child listed before its parent.
    pub fn post_order(&self) -> &[usize] {
        &self.post_order
    }

    /// The m-values vertex `v` can carry in this state, in descending order.
    pub fn reachable_ms(&self, v: usize) -> &[HalfInt] {
        &self.reachable[v]
    }

    /// Nonzero support of vertex `v` at output `m`, paired with the coefficients.
    pub fn weighted_support(&self, v: usize, m: HalfInt) -> Result<Vec<(Vec<HalfInt>, Scalar)>> {
        let vert = &self.vertices[v];
        let js = self.child_js(v);
        if !vert.provider.admits(vert.j, m, &js) {
            return Ok(Vec::new());
        }
        Ok(self
            .support_of(v, m, DEFAULT_SUPPORT_CAP)?
            .into_iter()
            .map(|t| {
                let val = vert.provider.value(vert.j, m, &self.pairs(&js, &t));
                (t, val)
            })
            .collect())
    }

    pub fn all_gc4_capable(&self) -> bool {
        self.vertices.iter().all(|v| v.provider.gc4_capable())
    }

    fn check_basis_string(&self, x: &[HalfInt]) -> Result<()> {
        if x.len() != self.leaves.len() {
            return Err(Error::InvalidArgument(format!(
                "basis string has {} entries, tree has {} leaves",
                x.len(),
                self.leaves.len()
            )));
        }
        for (i, (leaf, m)) in self.leaves.iter().zip(x).enumerate() {
            if leaf.code(*m).is_none() {
                return Err(Error::InvalidArgument(format!("leaf {i} has no basis state m = {m}")));
            }
        }
        Ok(())
    }

    /// <x|psi> as a product of one coefficient per vertex, using each provider's unique output m.
    pub fn amplitude(&self, x: &[HalfInt]) -> Result<Scalar> {
        if let Some(v) = self.vertices.iter().find(|v| !v.provider.gc4_capable()) {
            return Err(Error::Unsupported(format!(
                "provider {} cannot name a unique output m; use dense_state",
                v.provider.name()
            )));
        }
        self.check_basis_string(x)?;
        let mut ms = vec![HalfInt::ZERO; self.vertices.len()];
        let mut acc = Scalar::one();
        for &v in &self.post_order {
            let vert = &self.vertices[v];
            let children: Vec<(HalfInt, HalfInt)> = vert
                .children
                .iter()
                .map(|&c| match c {
                    Child::Leaf(l) => (self.leaves[l].j, x[l]),
                    Child::Vertex(w) => (self.vertices[w].j, ms[w]),
                })
                .collect();
            let Some(m) = vert.provider.unique_m(vert.j, &children) else {
                return Ok(Scalar::zero());
            };
            if v == self.root && m != self.root_m {
                return Ok(Scalar::zero());
            }
            ms[v] = m;
            let c = vert.provider.value(vert.j, m, &children);
            if c.is_zero() {
                return Ok(Scalar::zero());
            }
            acc = acc.mul(&c);
        }
        Ok(acc)
    }

    /// Amplitude for a string of basis codes rather than m-values.
    pub fn amplitude_codes(&self, codes: &[usize]) -> Result<Scalar> {
        let x = self.codes_to_string(codes)?;
        self.amplitude(&x)
    }

    pub fn codes_to_string(&self, codes: &[usize]) -> Result<BasisString> {
        if codes.len() != self.leaves.len() {
            return Err(Error::InvalidArgument("wrong number of codes".into()));
        }
        codes
            .iter()
            .zip(&self.leaves)
            .map(|(&c, l)| l.ms.get(c).copied().ok_or_else(|| Error::InvalidArgument(format!("code {c} out of range"))))
            .collect()
    }

    /// Leaf-product index of a basis string, first leaf most significant.
    pub fn index_of(&self, x: &[HalfInt]) -> Result<usize> {
        self.check_basis_string(x)?;
        Ok(self.leaves.iter().zip(x).fold(0, |acc, (l, m)| acc * l.dim() + l.code(*m).unwrap()))
    }

    pub fn string_of(&self, mut index: usize) -> BasisString {
        let mut out = vec![HalfInt::ZERO; self.leaves.len()];
        for (i, l) in self.leaves.iter().enumerate().rev() {
            out[i] = l.ms[index % l.dim()];
            index /= l.dim();
        }
        out
    }

    pub fn dimension(&self) -> Option<usize> {
        self.leaves.iter().try_fold(1usize, |acc, l| acc.checked_mul(l.dim()))
    }

    /// Draws x with probability |<x|psi>|^2, one provider draw per vertex from the root down.
    pub fn sample<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<BasisString> {
        let mut x = vec![HalfInt::ZERO; self.leaves.len()];
        let mut pending = vec![(self.root, self.root_m)];
        while let Some((v, m)) = pending.pop() {
            let options = self.weighted_support(v, m)?;
            let pick = draw(&options, rng);
            for (&c, &cm) in self.vertices[v].children.iter().zip(&options[pick].0) {
                match c {
                    Child::Leaf(l) => x[l] = cm,
                    Child::Vertex(w) => pending.push((w, cm)),
                }
            }
        }
        Ok(x)
    }

    /// Exact outcome probabilities of the sampler, from its full decision tree.
    pub fn sampler_distribution(&self) -> Result<BTreeMap<BasisString, BigRational>> {
        let mut out = BTreeMap::new();
        let start = vec![HalfInt::ZERO; self.leaves.len()];
        self.walk(vec![(self.root, self.root_m)], start, BigRational::one(), &mut out)?;
        Ok(out)
    }

    fn walk(
        &self,
        mut pending: Vec<(usize, HalfInt)>,
        x: BasisString,
        p: BigRational,
        out: &mut BTreeMap<BasisString, BigRational>,
    ) -> Result<()> {
        let Some((v, m)) = pending.pop() else {
            *out.entry(x).or_insert_with(BigRational::zero) += p;
            return Ok(());
        };
        for (tuple, val) in self.weighted_support(v, m)? {
            let w = val
                .norm_sqr_exact()
                .ok_or_else(|| Error::Unsupported("exact sampler probabilities need exact coefficients".into()))?;
            let mut x2 = x.clone();
            let mut pending2 = pending.clone();
            for (&c, &cm) in self.vertices[v].children.iter().zip(&tuple) {
                match c {
                    Child::Leaf(l) => x2[l] = cm,
                    Child::Vertex(w) => pending2.push((w, cm)),
                }
            }
            self.walk(pending2, x2, &p * &w, out)?;
        }
        Ok(())
    }

    /// The state vector over the leaf product space, first leaf most significant.
    pub fn dense_state(&self) -> Result<Vec<Complex64>> {
        self.dense_state_capped(DEFAULT_DENSE_CAP)
    }

    pub fn dense_state_capped(&self, cap: usize) -> Result<Vec<Complex64>> {
        let dim = self
            .dimension()
            .filter(|&d| d <= cap)
            .ok_or_else(|| Error::CapExceeded(format!("leaf product dimension exceeds {cap}")))?;
        let mut strides = vec![1usize; self.leaves.len()];
        for i in (0..self.leaves.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.leaves[i + 1].dim();
        }
        let mut psi = vec![Complex64::zero(); dim];
        for (idx, amp) in self.expand(self.root, self.root_m, &strides)? {
            psi[idx] += amp;
        }
        Ok(psi)
    }

    fn expand(&self, v: usize, m: HalfInt, strides: &[usize]) -> Result<Vec<(usize, Complex64)>> {
        let mut out = Vec::new();
        for (tuple, val) in self.weighted_support(v, m)? {
            let mut partial = vec![(0usize, val.to_complex())];
            for (&c, &cm) in self.vertices[v].children.iter().zip(&tuple) {
                let sub = match c {
                    Child::Leaf(l) => vec![(self.leaves[l].code(cm).map(|k| k * strides[l]), Complex64::new(1.0, 0.0))],
                    Child::Vertex(w) => self.expand(w, cm, strides)?.into_iter().map(|(i, a)| (Some(i), a)).collect(),
                };
                let mut next = Vec::with_capacity(partial.len() * sub.len());
                for &(i, a) in &partial {
                    for &(j, b) in &sub {
                        // A child m outside a leaf basis carries no amplitude.
                        if let Some(j) = j {
                            next.push((i + j, a * b));
                        }
                    }
                }
                partial = next;
            }
            out.extend(partial);
        }
        Ok(out)
    }
}

const TWO_POW_64: f64 = 18446744073709551616.0;

/// Inverts the cumulative distribution at a uniform draw; exact when every weight is.
fn draw<R: RngCore + ?Sized>(options: &[(Vec<HalfInt>, Scalar)], rng: &mut R) -> usize {
    let raw = rng.next_u64();
    let exact: Option<Vec<BigRational>> = options.iter().map(|(_, v)| v.norm_sqr_exact()).collect();
    match exact {
        Some(weights) => {
            let u = BigRational::new(BigInt::from(raw), BigInt::from(1u128 << 64));
            let total: BigRational = weights.iter().fold(BigRational::zero(), |a, w| a + w);
            let target = u * total;
            let mut cum = BigRational::zero();
            for (i, w) in weights.iter().enumerate() {
                cum += w;
                if cum > target && !w.is_zero() {
                    return i;
                }
            }
            weights.iter().rposition(|w| !w.is_zero()).unwrap_or(0)
        }
        None => {
            let weights: Vec<f64> = options.iter().map(|(_, v)| v.norm_sqr()).collect();
            let total: f64 = weights.iter().sum();
            let target = raw as f64 / TWO_POW_64 * total;
            let mut cum = 0.0;
            for (i, w) in weights.iter().enumerate() {
                cum += w;
                if cum > target && *w > 0.0 {
                    return i;
                }
            }
            weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
        }
    }
}
