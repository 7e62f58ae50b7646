use crate::angular::{recoupling_tensor, SixJLabel};
use crate::halfint::HalfInt;
use crate::scalar::Scalar;

use super::provider::{CouplingProvider, SupportIter};
use super::spec::ProviderSpec;

fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (a, b, c) = (a.doubled(), b.doubled(), c.doubled());
    a >= 0 && b >= 0 && c >= 0 && a >= (b - c).abs() && a <= b + c && (a + b + c) % 2 == 0
}

/// Recoupling tensors packaged as two-child coupling coefficients:
/// alpha^{J,M}_{j1,m1; j2,m2} = delta(m1, m2) [J b m1; j1 j2 M] for a fixed `b`.
///
/// The m-labels here are themselves angular momenta, so several outputs M can share the
/// same children.
#[derive(Debug, Clone, Copy)]
pub struct SixJProvider {
    b: HalfInt,
}

impl SixJProvider {
    pub fn new(b: HalfInt) -> Self {
        SixJProvider { b }
    }

    pub fn b(&self) -> HalfInt {
        self.b
    }

    fn label(&self, j: HalfInt, m: HalfInt, j1: HalfInt, j2: HalfInt, f: HalfInt) -> SixJLabel {
        SixJLabel::new(j, self.b, f, j1, j2, m)
    }
}

impl CouplingProvider for SixJProvider {
    fn name(&self) -> String {
        format!("six-j[b={}]", self.b)
    }

    fn arity(&self) -> usize {
        2
    }

    fn admits(&self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> bool {
        let [j1, j2] = children else { return false };
        (j + self.b + *j1 + *j2).is_integer() && triangle(*j2, j, m) && triangle(m, self.b, *j1)
    }

    fn value(&self, j: HalfInt, m: HalfInt, children: &[(HalfInt, HalfInt)]) -> Scalar {
        let [(j1, m1), (j2, m2)] = children else {
            return Scalar::zero();
        };
        if m1 != m2 || !self.admits(j, m, &[*j1, *j2]) || m1.doubled() < 0 {
            return Scalar::zero();
        }
        recoupling_tensor(self.label(j, m, *j1, *j2, *m1)).map(Scalar::Exact).unwrap_or_else(|_| Scalar::zero())
    }

    fn support<'a>(&'a self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> SupportIter<'a> {
        if !self.admits(j, m, children) {
            return Box::new(std::iter::empty());
        }
        let (j1, j2) = (children[0], children[1]);
        let lo = (j - self.b).abs().max((j1 - j2).abs());
        let hi = (j + self.b).min(j1 + j2);
        let b = self.b;
        Box::new(
            (lo.doubled()..=hi.doubled())
                .step_by(2)
                .map(HalfInt::from_doubled)
                .filter(move |&f| triangle(f, j, b) && triangle(f, j1, j2))
                .map(|f| vec![f, f]),
        )
    }

    fn j_labels(&self, bound: i64) -> Vec<HalfInt> {
        (0..=bound).map(HalfInt::from_doubled).collect()
    }

    fn m_labels(&self, _j: HalfInt, bound: i64) -> Vec<HalfInt> {
        (0..=bound).map(HalfInt::from_doubled).collect()
    }

    fn spec(&self) -> Option<ProviderSpec> {
        Some(ProviderSpec::SixJ { b: self.b.doubled() })
    }
}
