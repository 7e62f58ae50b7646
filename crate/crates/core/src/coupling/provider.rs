use std::fmt;

use super::spec::ProviderSpec;
use crate::halfint::HalfInt;
use crate::scalar::Scalar;

pub type SupportIter<'a> = Box<dyn Iterator<Item = Vec<HalfInt>> + 'a>;

/// A family of coupling coefficients alpha^{J,M}_{j1,m1; ...; jk,mk} joining k systems into one.
pub trait CouplingProvider: fmt::Debug + Send + Sync {
    fn name(&self) -> String;

    fn arity(&self) -> usize;

    /// Whether `(j, m)` is an admissible output for children carrying `children` j-labels.
    fn admits(&self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> bool;

    /// The coefficient; zero outside the support.
    fn value(&self, j: HalfInt, m: HalfInt, children: &[(HalfInt, HalfInt)]) -> Scalar;

    /// Every child m-tuple on which `value(j, m, ..)` may be nonzero.
    fn support<'a>(&'a self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> SupportIter<'a>;

    /// The only output m with a nonzero coefficient for these children, when the provider knows it.
    fn unique_m(&self, _j: HalfInt, _children: &[(HalfInt, HalfInt)]) -> Option<HalfInt> {
        None
    }

    fn gc4_capable(&self) -> bool {
        false
    }

    /// j-labels to range over when checking the axioms up to `bound` (doubled).
    fn j_labels(&self, bound: i64) -> Vec<HalfInt>;

    /// m-labels a system with label `j` may carry, up to `bound` (doubled).
    fn m_labels(&self, j: HalfInt, bound: i64) -> Vec<HalfInt>;

    /// Serializable description, for providers that have one.
    fn spec(&self) -> Option<ProviderSpec> {
        None
    }
}
