mod common;

use common::oracles::coupled_states_by_lowering;
use common::spin::{dist, s2, sz};
use num_complex::Complex64;
use proptest::prelude::*;
use schur_core::pqc::{
    all_trees, balanced_tree, enumerate_labellings, pqc_state, schur_tree, spin_operator, yamanouchi_decode,
    yamanouchi_encode, Branch, PqcLabels, PqcTree, SpinKind, YamanouchiCode,
};
use schur_core::HalfInt;

fn h(d: i64) -> HalfInt {
    HalfInt::from_doubled(d)
}

fn subsets_of(n: usize) -> Vec<Vec<usize>> {
    (1u32..1 << n).map(|mask| (1..=n).filter(|&q| mask >> (q - 1) & 1 == 1).collect()).collect()
}

fn double_factorial(k: usize) -> usize {
    (1..=k).rev().step_by(2).product()
}

#[test]
fn subset_operators_commute() {
    for n in [4, 5] {
        for tree in all_trees(n).unwrap() {
            let mut ops = vec![spin_operator(&(1..=n).collect::<Vec<_>>(), SpinKind::Z, n).unwrap()];
            for s in tree.subsets() {
                ops.push(spin_operator(s, SpinKind::Total, n).unwrap());
            }
            for a in &ops {
                assert!(a.is_symmetric());
                for b in &ops {
                    assert!(a.commutes_with(b), "{tree}");
                }
            }
        }
    }
}

#[test]
fn nested_and_disjoint_subsets_commute_at_n4() {
    let n = 4;
    let subsets = subsets_of(n);
    let set = |s: &[usize]| s.iter().fold(0u32, |acc, &q| acc | 1 << q);
    for a in &subsets {
        let s2a = spin_operator(a, SpinKind::Total, n).unwrap();
        for b in &subsets {
            let (ma, mb) = (set(a), set(b));
            if ma & mb == ma {
                assert!(s2a.commutes_with(&spin_operator(b, SpinKind::Z, n).unwrap()), "{a:?} in {b:?}");
            }
            if ma & mb == 0 {
                assert!(s2a.commutes_with(&spin_operator(b, SpinKind::Total, n).unwrap()), "{a:?}, {b:?}");
            }
        }
    }
}

#[test]
fn overlapping_subsets_do_not_commute() {
    let a = spin_operator(&[1, 2], SpinKind::Total, 3).unwrap();
    let b = spin_operator(&[2, 3], SpinKind::Total, 3).unwrap();
    assert!(!a.commutes_with(&b));
}

#[test]
fn single_qubit_casimir() {
    let op = spin_operator(&[2], SpinKind::Total, 3).unwrap();
    assert_eq!(op.scale(), 4);
    for r in 0..8 {
        for c in 0..8 {
            assert_eq!(op.scaled_entry(r, c), if r == c { 3 } else { 0 });
        }
    }
}

#[test]
fn spin_operator_matches_oracle() {
    let n = 4;
    for subset in subsets_of(n) {
        let op = spin_operator(&subset, SpinKind::Total, n).unwrap();
        let z = spin_operator(&subset, SpinKind::Z, n).unwrap();
        for x in 0..1 << n {
            let mut e = vec![Complex64::default(); 1 << n];
            e[x] = Complex64::new(1.0, 0.0);
            assert!(dist(&op.apply(&e), &s2(n, &subset, &e)) < 1e-12);
            assert!(dist(&z.apply(&e), &sz(n, &subset, &e)) < 1e-12);
        }
    }
}

#[test]
fn spin_operator_rejects_bad_input() {
    assert!(spin_operator(&[], SpinKind::Z, 3).is_err());
    assert!(spin_operator(&[4], SpinKind::Z, 3).is_err());
    assert!(spin_operator(&[1], SpinKind::Z, 15).is_err());
}

fn check_eigenbasis(tree: &PqcTree) {
    let n = tree.n();
    let labels = enumerate_labellings(tree);
    assert_eq!(labels.len(), 1 << n);
    let states: Vec<Vec<Complex64>> =
        labels.iter().map(|l| pqc_state(tree, l).unwrap().dense_state().unwrap()).collect();
    for (a, va) in states.iter().enumerate() {
        for (b, vb) in states.iter().enumerate().skip(a) {
            let g: Complex64 = va.iter().zip(vb).map(|(x, y)| x.conj() * y).sum();
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((g - expect).norm() < 1e-10, "{tree}: <{a}|{b}> = {g}");
        }
    }
    let all: Vec<usize> = (1..=n).collect();
    for (l, v) in labels.iter().zip(&states) {
        for (i, s) in tree.subsets().iter().enumerate() {
            let j = l.js[i].to_f64();
            let expect: Vec<Complex64> = v.iter().map(|a| a * (j * (j + 1.0))).collect();
            assert!(dist(&s2(n, s, v), &expect) < 1e-10, "{tree} {l}: S^2 on {s:?}");
        }
        let m = l.m.to_f64();
        let expect: Vec<Complex64> = v.iter().map(|a| a * m).collect();
        assert!(dist(&sz(n, &all, v), &expect) < 1e-10, "{tree} {l}: Z");
    }
}

#[test]
fn every_four_qubit_tree_gives_an_eigenbasis() {
    let trees = all_trees(4).unwrap();
    assert_eq!(trees.len(), 15);
    for tree in &trees {
        check_eigenbasis(tree);
    }
}

#[test]
fn schur_tree_eigenbasis_up_to_six_qubits() {
    for n in 2..=6 {
        check_eigenbasis(&schur_tree(n).unwrap());
    }
}

#[test]
fn tree_counts_are_double_factorials() {
    for n in 2..=7 {
        assert_eq!(all_trees(n).unwrap().len(), double_factorial(2 * n - 3), "n = {n}");
    }
}

#[test]
fn schur_tree_shape() {
    let t = schur_tree(5).unwrap();
    assert_eq!(t.subsets(), &[vec![1, 2], vec![1, 2, 3], vec![1, 2, 3, 4], vec![1, 2, 3, 4, 5]]);
    assert!(t.is_sequential());
    assert_eq!(schur_tree(2).unwrap().subsets(), &[vec![1, 2]]);
    assert!(schur_tree(1).is_err());
    let big = schur_tree(64).unwrap();
    for (i, s) in big.subsets().iter().enumerate() {
        assert_eq!(s, &(1..=i + 2).collect::<Vec<_>>());
    }
}

#[test]
fn labelling_counts() {
    assert_eq!(enumerate_labellings(&schur_tree(5).unwrap()).len(), 32);
    let bal = balanced_tree(4).unwrap();
    assert_eq!(bal.subsets(), &[vec![1, 2], vec![3, 4], vec![1, 2, 3, 4]]);
    let ones = enumerate_labellings(&bal).into_iter().filter(|l| l.total_j() == h(2)).count();
    assert_eq!(ones, 9);
}

#[test]
fn labellings_are_sorted_larger_first() {
    let labels = enumerate_labellings(&schur_tree(4).unwrap());
    let key = |l: &PqcLabels| l.js.iter().chain([&l.m]).map(|x| -x.doubled()).collect::<Vec<_>>();
    assert!(labels.windows(2).all(|w| key(&w[0]) < key(&w[1])));
    assert_eq!(labels[0], PqcLabels { js: vec![h(2), h(3), h(4)], m: h(4) });
}

#[test]
fn two_qubit_triplet_top_is_up_up() {
    let t = schur_tree(2).unwrap();
    let v = pqc_state(&t, &PqcLabels { js: vec![h(2)], m: h(2) }).unwrap().dense_state().unwrap();
    assert!((v[3] - 1.0).norm() < 1e-15);
    assert!(v[..3].iter().all(|a| a.norm() < 1e-15));
}

#[test]
fn three_qubit_singlet_pair() {
    let t = schur_tree(3).unwrap();
    let v = pqc_state(&t, &PqcLabels { js: vec![h(0), h(1)], m: h(1) }).unwrap().dense_state().unwrap();
    assert!(s2(3, &[1, 2], &v).iter().all(|a| a.norm() < 1e-12));
    let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum();
    assert!((norm - 1.0).abs() < 1e-12);
}

#[test]
fn invalid_labels_are_rejected() {
    let t = schur_tree(3).unwrap();
    assert!(pqc_state(&t, &PqcLabels { js: vec![h(0), h(3)], m: h(1) }).is_err());
    assert!(pqc_state(&t, &PqcLabels { js: vec![h(2), h(1)], m: h(3) }).is_err());
    assert!(pqc_state(&t, &PqcLabels { js: vec![h(2)], m: h(1) }).is_err());
}

#[test]
fn five_qubit_example_wavefunction() {
    let tree = PqcTree::from_subsets(5, vec![vec![1, 2], vec![4, 5], vec![1, 2, 3], vec![1, 2, 3, 4, 5]]).unwrap();
    assert_eq!(tree.branches(3), (Branch::Vertex(1), Branch::Qubit(3)));
    assert_eq!(tree.branches(4), (Branch::Vertex(3), Branch::Vertex(2)));
    let labels = PqcLabels { js: vec![h(2), h(0), h(3), h(3)], m: h(1) };
    let v = pqc_state(&tree, &labels).unwrap().dense_state().unwrap();

    let cg = |dj1: i64, dm1: i64, dj2: i64, dm2: i64, dj: i64, dm: i64| -> f64 {
        if dm1.abs() > dj1 || dm2.abs() > dj2 || dm.abs() > dj || dm1 + dm2 != dm {
            return 0.0;
        }
        let states = coupled_states_by_lowering(dj1, dj2);
        let k1 = ((dm1 + dj1) / 2) as usize;
        let k2 = ((dm2 + dj2) / 2) as usize;
        states.get(&(dj, dm)).map_or(0.0, |s| s[k1 * (dj2 as usize + 1) + k2])
    };
    for x in 0..32usize {
        let d: Vec<i64> = (0..5).map(|q| if x >> (4 - q) & 1 == 1 { 1 } else { -1 }).collect();
        let expect = cg(3, d[0] + d[1] + d[2], 0, d[3] + d[4], 3, 1)
            * cg(2, d[0] + d[1], 1, d[2], 3, d[0] + d[1] + d[2])
            * cg(1, d[0], 1, d[1], 2, d[0] + d[1])
            * cg(1, d[3], 1, d[4], 0, d[3] + d[4]);
        assert!((v[x] - expect).norm() < 1e-12, "x = {x:05b}: {} vs {expect}", v[x]);
    }
}

#[test]
fn child_tags_round_trip() {
    let tree = PqcTree::from_children(5, &[-1, -4, 1, 3], &[-2, -5, -3, 2]).unwrap();
    assert_eq!(tree.subsets(), &[vec![1, 2], vec![4, 5], vec![1, 2, 3], vec![1, 2, 3, 4, 5]]);
    assert!(PqcTree::from_children(3, &[-1, -1], &[-2, 1]).is_err());
}

#[test]
fn malformed_subsets_are_rejected() {
    assert!(PqcTree::from_subsets(3, vec![vec![1, 2, 3], vec![1, 2]]).is_err());
    assert!(PqcTree::from_subsets(4, vec![vec![1, 2], vec![2, 3], vec![1, 2, 3, 4]]).is_err());
    assert!(PqcTree::from_subsets(3, vec![vec![1, 2], vec![1, 2]]).is_err());
}

#[test]
fn yamanouchi_examples() {
    let code = yamanouchi_encode(&[h(0), h(1), h(2)]).unwrap();
    assert_eq!(code.to_string(), "011");
    assert_eq!(yamanouchi_decode(&"011".parse().unwrap()).unwrap(), vec![h(0), h(1), h(2)]);
    let raise: Vec<HalfInt> = (2..=9).map(h).collect();
    assert_eq!(yamanouchi_encode(&raise).unwrap().to_string(), "11111111");
    assert!(yamanouchi_decode(&"00".parse().unwrap()).is_err());
    assert!(yamanouchi_encode(&[h(2), h(2)]).is_err());
    assert!("012".parse::<YamanouchiCode>().is_err());
}

fn valid_code() -> impl Strategy<Value = Vec<bool>> {
    prop::collection::vec(any::<bool>(), 0..=20).prop_map(|mut bits| {
        let mut dj = 1i64;
        for b in bits.iter_mut() {
            if dj == 0 {
                *b = true;
            }
            dj += if *b { 1 } else { -1 };
        }
        bits
    })
}

proptest! {
    #[test]
    fn yamanouchi_round_trip(bits in valid_code()) {
        let code = YamanouchiCode(bits);
        let js = yamanouchi_decode(&code).unwrap();
        prop_assert_eq!(yamanouchi_encode(&js).unwrap(), code);
    }
}

#[test]
fn yamanouchi_round_trip_exhaustive() {
    for len in 0..=20usize {
        for word in 0u32..1 << len {
            let code = YamanouchiCode((0..len).map(|k| word >> k & 1 == 1).collect());
            if let Ok(js) = yamanouchi_decode(&code) {
                assert_eq!(yamanouchi_encode(&js).unwrap(), code);
            }
        }
    }
}
