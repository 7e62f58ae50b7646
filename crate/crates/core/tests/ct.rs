use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::Matrix2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use schur_core::coupling::{CgProvider, Child, CouplingProvider, CouplingTree, Leaf, SupportIter, Vertex};
use schur_core::ct::{
    all_strings, amplitude_distribution, apply_basis_preserving, apply_one_qubit_gate, from_coupling_tree, hadamard,
    BasisPreservingOp, Bits, CountingState, CtState, DEFAULT_COST_BUDGET,
};
use schur_core::pqc::{balanced_tree, enumerate_labellings, pqc_state, schur_tree};
use schur_core::{Error, HalfInt, Scalar};

fn h(d: i64) -> HalfInt {
    HalfInt::from_doubled(d)
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn index(x: &[bool]) -> usize {
    x.iter().fold(0, |acc, &b| acc << 1 | b as usize)
}

fn singlet() -> CouplingTree {
    CouplingTree::new(
        vec![Leaf::qubit(), Leaf::qubit()],
        vec![Vertex::new(Arc::new(CgProvider), h(0), vec![Child::Leaf(0), Child::Leaf(1)])],
        0,
        h(0),
    )
    .unwrap()
}

fn pqc(tree: &schur_core::pqc::PqcTree, k: usize) -> (Arc<dyn CtState>, Vec<Complex64>) {
    let labels = &enumerate_labellings(tree)[k];
    let t = pqc_state(tree, labels).unwrap();
    let dense = t.dense_state().unwrap();
    (from_coupling_tree(t).unwrap(), dense)
}

/// Dense reference for a one-qubit gate on qubit q (1-based, qubit 1 most significant).
fn dense_gate(psi: &[Complex64], n: usize, g: &Matrix2<Complex64>, q: usize) -> Vec<Complex64> {
    let bit = n - q;
    (0..psi.len())
        .map(|x| {
            let xb = x >> bit & 1;
            let lo = x & !(1 << bit);
            g[(xb, 0)] * psi[lo] + g[(xb, 1)] * psi[lo | 1 << bit]
        })
        .collect()
}

fn assert_matches_dense(state: &dyn CtState, dense: &[Complex64], tol: f64) {
    for x in all_strings(state.n()) {
        let a = state.amplitude(&x).unwrap();
        assert!((a - dense[index(&x)]).norm() < tol, "{x:?}: {a} vs {}", dense[index(&x)]);
    }
}

fn assert_same_distribution(a: &BTreeMap<Bits, f64>, b: &BTreeMap<Bits, f64>, tol: f64) {
    let keys: std::collections::BTreeSet<&Bits> = a.keys().chain(b.keys()).collect();
    for k in keys {
        let (p, q) = (a.get(k).copied().unwrap_or(0.0), b.get(k).copied().unwrap_or(0.0));
        assert!((p - q).abs() <= tol, "{k:?}: {p} vs {q}");
    }
}

fn dense_distribution(dense: &[Complex64], n: usize) -> BTreeMap<Bits, f64> {
    all_strings(n).map(|x| (x.clone(), dense[index(&x)].norm_sqr())).filter(|(_, p)| *p > 0.0).collect()
}

/// Draws many samples and checks each frequency against `expect` within five standard deviations.
fn assert_sampler_agrees(state: &dyn CtState, expect: &BTreeMap<Bits, f64>, draws: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts: BTreeMap<Bits, usize> = BTreeMap::new();
    for _ in 0..draws {
        *counts.entry(state.sample(&mut rng).unwrap()).or_insert(0) += 1;
    }
    for (x, k) in &counts {
        assert!(expect.get(x).copied().unwrap_or(0.0) > 0.0, "sampled impossible outcome {x:?}");
        let _ = k;
    }
    for (x, &p) in expect {
        let f = counts.get(x).copied().unwrap_or(0) as f64 / draws as f64;
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((f - p).abs() <= 5.0 * sigma + 1e-12, "{x:?}: frequency {f} vs {p}");
    }
}

#[test]
fn singlet_amplitudes() {
    let s = from_coupling_tree(singlet()).unwrap();
    let r = 0.5f64.sqrt();
    assert!((s.amplitude(&[true, false]).unwrap() - r).norm() < 1e-15);
    assert!((s.amplitude(&[false, true]).unwrap() + r).norm() < 1e-15);
    assert_eq!(s.amplitude(&[true, true]).unwrap(), c(0.0, 0.0));
    assert_matches_dense(s.as_ref(), &singlet().dense_state().unwrap(), 1e-15);
    assert_eq!(s.cost_factor(), 1);
    assert!(s.amplitude(&[true]).is_err());
}

#[test]
fn six_qubit_schur_state_sampler() {
    let tree = schur_tree(6).unwrap();
    for k in [0, 17, 40] {
        let (s, dense) = pqc(&tree, k);
        let sampler = s.sampler_distribution().unwrap();
        assert_same_distribution(&sampler, &dense_distribution(&dense, 6), 1e-12);
        assert_same_distribution(&amplitude_distribution(s.as_ref()).unwrap(), &sampler, 1e-12);
        let total: f64 = sampler.values().sum();
        assert!((total - 1.0).abs() < 1e-9);
        assert_sampler_agrees(s.as_ref(), &sampler, 20_000, k as u64);
    }
}

#[derive(Debug)]
struct NoUniqueM;

impl CouplingProvider for NoUniqueM {
    fn name(&self) -> String {
        "cg without unique m".into()
    }
    fn arity(&self) -> usize {
        2
    }
    fn admits(&self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> bool {
        CgProvider.admits(j, m, children)
    }
    fn value(&self, j: HalfInt, m: HalfInt, children: &[(HalfInt, HalfInt)]) -> Scalar {
        CgProvider.value(j, m, children)
    }
    fn support<'a>(&'a self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> SupportIter<'a> {
        let v: Vec<Vec<HalfInt>> = CgProvider.support(j, m, children).collect();
        Box::new(v.into_iter())
    }
    fn j_labels(&self, bound: i64) -> Vec<HalfInt> {
        CgProvider.j_labels(bound)
    }
    fn m_labels(&self, j: HalfInt, bound: i64) -> Vec<HalfInt> {
        CgProvider.m_labels(j, bound)
    }
}

#[test]
fn providers_without_unique_m_are_refused() {
    let tree = CouplingTree::new(
        vec![Leaf::qubit(), Leaf::qubit()],
        vec![Vertex::new(Arc::new(NoUniqueM), h(0), vec![Child::Leaf(0), Child::Leaf(1)])],
        0,
        h(0),
    )
    .unwrap();
    assert!(matches!(from_coupling_tree(tree), Err(Error::Unsupported(_))));
}

#[test]
fn identity_and_bit_flip() {
    let tree = balanced_tree(4).unwrap();
    let (s, dense) = pqc(&tree, 5);
    let id = apply_basis_preserving(s.clone(), BasisPreservingOp::identity(2).unwrap()).unwrap();
    assert_matches_dense(id.as_ref(), &dense, 1e-15);
    let flipped = apply_basis_preserving(s.clone(), BasisPreservingOp::bit_flip(3).unwrap()).unwrap();
    for x in all_strings(4) {
        let mut y = x.clone();
        y[2] = !y[2];
        assert_eq!(flipped.amplitude(&x).unwrap(), s.amplitude(&y).unwrap());
    }
    assert_eq!(flipped.cost_factor(), 1);
    assert!(apply_basis_preserving(s, BasisPreservingOp::bit_flip(5).unwrap()).is_err());
}

#[test]
fn phase_ops_keep_the_distribution() {
    let tree = balanced_tree(4).unwrap();
    let (s, _) = pqc(&tree, 3);
    let op = BasisPreservingOp::phase(vec![1, 4], vec![0.0, 0.7, -1.3, 2.9]).unwrap();
    let p = apply_basis_preserving(s.clone(), op).unwrap();
    assert_same_distribution(&p.sampler_distribution().unwrap(), &s.sampler_distribution().unwrap(), 0.0);
    for x in all_strings(4) {
        assert!((p.amplitude(&x).unwrap().norm() - s.amplitude(&x).unwrap().norm()).abs() < 1e-15);
    }
    let z = p.amplitude(&[true, false, true, false]).unwrap();
    let expect = s.amplitude(&[true, false, true, false]).unwrap() * Complex64::from_polar(1.0, -1.3);
    assert!((z - expect).norm() < 1e-15);
}

#[test]
fn pushforward_law() {
    let tree = schur_tree(6).unwrap();
    let (s, _) = pqc(&tree, 9);
    // y -> y + 5 mod 8 on qubits (2, 5, 6), with a phase.
    let op = BasisPreservingOp::from_fn(vec![2, 5, 6], |y| (y as f64 * 0.3, (y + 5) % 8)).unwrap();
    let t = apply_basis_preserving(s.clone(), op).unwrap();
    let before = s.sampler_distribution().unwrap();
    let mut expect: BTreeMap<Bits, f64> = BTreeMap::new();
    for (y, p) in &before {
        let local = (y[1] as usize) << 2 | (y[4] as usize) << 1 | y[5] as usize;
        let img = (local + 5) % 8;
        let mut x = y.clone();
        x[1] = img >> 2 & 1 == 1;
        x[4] = img >> 1 & 1 == 1;
        x[5] = img & 1 == 1;
        *expect.entry(x).or_insert(0.0) += p;
    }
    assert_eq!(t.sampler_distribution().unwrap(), expect);
    assert_same_distribution(&amplitude_distribution(t.as_ref()).unwrap(), &expect, 1e-12);
    assert_sampler_agrees(t.as_ref(), &expect, 20_000, 5);
}

#[test]
fn non_bijections_are_rejected() {
    assert!(BasisPreservingOp::from_fn(vec![1, 2], |_| (0.0, 0)).is_err());
    assert!(BasisPreservingOp::from_fn(vec![1, 1], |y| (0.0, y)).is_err());
    assert!(BasisPreservingOp::from_fn(vec![0], |y| (0.0, y)).is_err());
    assert!(BasisPreservingOp::phase(vec![1], vec![0.0]).is_err());
}

#[test]
fn hadamard_on_zero() {
    let zero = CouplingTree::new(vec![Leaf::qubit()], vec![], 0, h(-1));
    // A lone qubit has no vertex; build |0> from the singlet's first qubit instead when unsupported.
    let state: Arc<dyn CtState> = match zero {
        Ok(t) => from_coupling_tree(t).unwrap(),
        Err(_) => {
            let t = CouplingTree::new(
                vec![Leaf::qubit(), Leaf::qubit()],
                vec![Vertex::new(Arc::new(CgProvider), h(2), vec![Child::Leaf(0), Child::Leaf(1)])],
                0,
                h(-2),
            )
            .unwrap();
            from_coupling_tree(t).unwrap()
        }
    };
    let hs = apply_one_qubit_gate(state.clone(), hadamard(), 1, DEFAULT_COST_BUDGET).unwrap();
    let r = 0.5f64.sqrt();
    let zeros = vec![false; state.n()];
    let mut one = zeros.clone();
    one[0] = true;
    assert!((hs.amplitude(&zeros).unwrap() - r).norm() < 1e-15);
    assert!((hs.amplitude(&one).unwrap() - r).norm() < 1e-15);
    let dist = hs.sampler_distribution().unwrap();
    assert!((dist[&zeros] - 0.5).abs() < 1e-15 && (dist[&one] - 0.5).abs() < 1e-15);
    assert_eq!(hs.cost_factor(), 2);
}

#[test]
fn hadamard_twice_is_identity() {
    let tree = balanced_tree(4).unwrap();
    for k in [0, 6, 11] {
        let (s, dense) = pqc(&tree, k);
        let once = apply_one_qubit_gate(s, hadamard(), 2, DEFAULT_COST_BUDGET).unwrap();
        let twice = apply_one_qubit_gate(once, hadamard(), 2, DEFAULT_COST_BUDGET).unwrap();
        assert_eq!(twice.cost_factor(), 4);
        assert_matches_dense(twice.as_ref(), &dense, 1e-10);
    }
}

#[test]
fn hadamard_on_balanced_tree_state() {
    let tree = balanced_tree(4).unwrap();
    for k in 0..16 {
        let (s, dense) = pqc(&tree, k);
        let hs = apply_one_qubit_gate(s, hadamard(), 1, DEFAULT_COST_BUDGET).unwrap();
        let expect = dense_gate(&dense, 4, &hadamard(), 1);
        assert_matches_dense(hs.as_ref(), &expect, 1e-12);
        assert_same_distribution(&hs.sampler_distribution().unwrap(), &dense_distribution(&expect, 4), 1e-10);
    }
    let (s, dense) = pqc(&tree, 7);
    let hs = apply_one_qubit_gate(s, hadamard(), 1, DEFAULT_COST_BUDGET).unwrap();
    assert_sampler_agrees(hs.as_ref(), &dense_distribution(&dense_gate(&dense, 4, &hadamard(), 1), 4), 20_000, 9);
}

#[test]
fn gate_chain_up_to_eight_qubits() {
    let tree = schur_tree(8).unwrap();
    let (mut s, mut dense) = pqc(&tree, 100);
    let gates = [
        (hadamard(), 3),
        (Matrix2::new(c(0.6, 0.0), c(0.0, -0.8), c(0.0, -0.8), c(0.6, 0.0)), 7),
        (Matrix2::new(c(0.0, 0.6), c(0.8, 0.0), c(-0.8, 0.0), c(0.0, -0.6)), 1),
    ];
    for (g, q) in gates {
        s = apply_one_qubit_gate(s, g, q, DEFAULT_COST_BUDGET).unwrap();
        dense = dense_gate(&dense, 8, &g, q);
        s = apply_basis_preserving(s, BasisPreservingOp::cnot(q, q % 8 + 1).unwrap()).unwrap();
        let t = q % 8 + 1;
        dense = (0..256usize).map(|x| if x >> (8 - q) & 1 == 1 { dense[x ^ 1 << (8 - t)] } else { dense[x] }).collect();
    }
    assert_eq!(s.cost_factor(), 8);
    assert_matches_dense(s.as_ref(), &dense, 1e-10);
    assert_same_distribution(&s.sampler_distribution().unwrap(), &dense_distribution(&dense, 8), 1e-10);
}

#[test]
fn x_gate_both_ways() {
    let pauli_x = Matrix2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0));
    for n in [3, 6] {
        let tree = schur_tree(n).unwrap();
        let (s, _) = pqc(&tree, 2);
        for q in 1..=n {
            let a = apply_basis_preserving(s.clone(), BasisPreservingOp::bit_flip(q).unwrap()).unwrap();
            let b = apply_one_qubit_gate(s.clone(), pauli_x, q, DEFAULT_COST_BUDGET).unwrap();
            assert_same_distribution(&a.sampler_distribution().unwrap(), &b.sampler_distribution().unwrap(), 1e-15);
        }
    }
}

#[test]
fn cost_doubles_and_budget_is_enforced() {
    let tree = schur_tree(4).unwrap();
    let (s, _) = pqc(&tree, 4);
    let base = CountingState::new(s);
    let mut state: Arc<dyn CtState> = base.clone();
    for g in 1..=5u32 {
        state = apply_one_qubit_gate(state, hadamard(), (g as usize - 1) % 4 + 1, DEFAULT_COST_BUDGET).unwrap();
        state = apply_basis_preserving(state, BasisPreservingOp::bit_flip(2).unwrap()).unwrap();
        assert_eq!(state.cost_factor(), 1 << g);
        base.reset();
        state.amplitude(&[true, false, true, true]).unwrap();
        assert_eq!(base.calls(), 1 << g);
    }
    let capped = apply_one_qubit_gate(state.clone(), hadamard(), 1, 32);
    assert!(matches!(capped, Err(Error::BudgetExceeded { cost: 64, budget: 32 })));
    assert!(apply_one_qubit_gate(state.clone(), hadamard(), 1, 64).is_ok());
    let bad = Matrix2::new(c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
    assert!(matches!(apply_one_qubit_gate(state.clone(), bad, 1, 64), Err(Error::NotUnitary(_))));
    assert!(apply_one_qubit_gate(state, hadamard(), 9, 64).is_err());
}
