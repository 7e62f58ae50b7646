use crate::angular::clebsch_gordan;
use crate::halfint::{valid_pair, HalfInt};
use crate::scalar::Scalar;

use super::provider::{CouplingProvider, SupportIter};
use super::spec::ProviderSpec;

fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.doubled(), b.doubled(), c.doubled());
    a >= 0 && b >= 0 && c >= 0 && a >= (b - c).abs() && a <= b + c && (a + b + c) % 2 == 0
}

/// SU(2) Clebsch-Gordan coupling of two spins.
#[derive(Debug, Clone, Copy, Default)]
pub struct CgProvider;

impl CouplingProvider for CgProvider {
    fn name(&self) -> String {
        "cg".into()
    }

    fn arity(&self) -> usize {
        2
    }

    fn admits(&self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> bool {
        children.len() == 2 && valid_pair(j, m) && triangle(j, children[0], children[1])
    }

    fn value(&self, j: HalfInt, m: HalfInt, children: &[(HalfInt, HalfInt)]) -> Scalar {
        let [(j1, m1), (j2, m2)] = children else {
            return Scalar::zero();
        };
        clebsch_gordan(*j1, *m1, *j2, *m2, j, m).map(Scalar::Exact).unwrap_or_else(|_| Scalar::zero())
    }

    fn support<'a>(&'a self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> SupportIter<'a> {
        if !self.admits(j, m, children) {
            return Box::new(std::iter::empty());
        }
        let (j1, j2) = (children[0], children[1]);
        Box::new(j1.m_values().map(move |m1| vec![m1, m - m1]).filter(move |t| valid_pair(j2, t[1])))
    }

    fn unique_m(&self, j: HalfInt, children: &[(HalfInt, HalfInt)]) -> Option<HalfInt> {
        let [(j1, m1), (j2, m2)] = children else {
            return None;
        };
        let m = *m1 + *m2;
        (valid_pair(*j1, *m1) && valid_pair(*j2, *m2) && self.admits(j, m, &[*j1, *j2])).then_some(m)
    }

    fn gc4_capable(&self) -> bool {
        true
    }

    fn j_labels(&self, bound: i64) -> Vec<HalfInt> {
        (0..=bound).map(HalfInt::from_doubled).collect()
    }

    fn m_labels(&self, j: HalfInt, _bound: i64) -> Vec<HalfInt> {
        j.m_values().collect()
    }

    fn spec(&self) -> Option<ProviderSpec> {
        Some(ProviderSpec::Cg)
    }
}

/// k spins coupled one after another through fixed intermediate labels:
/// ((j1 j2) i1, j3) i2, ... , jk) J.
#[derive(Debug, Clone)]
pub struct SequentialCgProvider {
    intermediates: Vec<HalfInt>,
}

impl SequentialCgProvider {
    /// `intermediates` holds the k-2 labels between the first pair and the output.
    pub fn new(intermediates: Vec<HalfInt>) -> Self {
        SequentialCgProvider { intermediates }
    }

    pub fn intermediates(&self) -> &[HalfInt] {
        &self.intermediates
    }

    /// Output labels of each coupling along the chain, ending with `j`.
    fn chain(&self, j: HalfInt) -> Vec<HalfInt> {
        let mut c = self.intermediates.clone();
        c.push(j);
        c
    }
}

impl CouplingProvider for SequentialCgProvider {
    fn name(&self) -> String {
        let labels: Vec<String> = self.intermediates.iter().map(|h| h.to_string()).collect();
        format!("seq-cg[{}]", labels.join(","))
    }

    fn arity(&self) -> usize {
        self.intermediates.len() + 2
    }

    fn admits(&self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> bool {
        if children.len() != self.arity() || !valid_pair(j, m) {
            return false;
        }
        let chain = self.chain(j);
        let mut acc = children[0];
        for (k, &out) in chain.iter().enumerate() {
            if !triangle(out, acc, children[k + 1]) {
                return false;
            }
            acc = out;
        }
        true
    }

    fn value(&self, j: HalfInt, m: HalfInt, children: &[(HalfInt, HalfInt)]) -> Scalar {
        let js: Vec<HalfInt> = children.iter().map(|c| c.0).collect();
        if !self.admits(j, m, &js) || children.iter().map(|c| c.1).sum::<HalfInt>() != m {
            return Scalar::zero();
        }
        let chain = self.chain(j);
        let (mut acc_j, mut acc_m) = children[0];
        let mut out = crate::radical::RadicalRational::one();
        for (k, &next_j) in chain.iter().enumerate() {
            let (cj, cm) = children[k + 1];
            let next_m = acc_m + cm;
            if !valid_pair(next_j, next_m) {
                return Scalar::zero();
            }
            match clebsch_gordan(acc_j, acc_m, cj, cm, next_j, next_m) {
                Ok(c) => out = &out * &c,
                Err(_) => return Scalar::zero(),
            }
            acc_j = next_j;
            acc_m = next_m;
        }
        Scalar::Exact(out)
    }

    fn support<'a>(&'a self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> SupportIter<'a> {
        if !self.admits(j, m, children) {
            return Box::new(std::iter::empty());
        }
        let children = children.to_vec();
        let k = children.len();
        let mut tuples: Vec<Vec<HalfInt>> = vec![vec![]];
        for c in &children[..k - 1] {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    c.m_values().map(move |mc| {
                        let mut t = t.clone();
                        t.push(mc);
                        t
                    })
                })
                .collect();
        }
        let last = children[k - 1];
        Box::new(tuples.into_iter().filter_map(move |mut t| {
            let rest = m - t.iter().copied().sum::<HalfInt>();
            valid_pair(last, rest).then(|| {
                t.push(rest);
                t
            })
        }))
    }

    fn unique_m(&self, j: HalfInt, children: &[(HalfInt, HalfInt)]) -> Option<HalfInt> {
        let m: HalfInt = children.iter().map(|c| c.1).sum();
        let js: Vec<HalfInt> = children.iter().map(|c| c.0).collect();
        (children.iter().all(|&(cj, cm)| valid_pair(cj, cm)) && self.admits(j, m, &js)).then_some(m)
    }

    fn gc4_capable(&self) -> bool {
        true
    }

    fn j_labels(&self, bound: i64) -> Vec<HalfInt> {
        (0..=bound).map(HalfInt::from_doubled).collect()
    }

    fn m_labels(&self, j: HalfInt, _bound: i64) -> Vec<HalfInt> {
        j.m_values().collect()
    }

    fn spec(&self) -> Option<ProviderSpec> {
        Some(ProviderSpec::SeqCg { intermediates: self.intermediates.iter().map(|h| h.doubled()).collect() })
    }
}
