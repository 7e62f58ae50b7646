use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

use super::provider::CouplingProvider;

/// Support entries examined per (J, M, children) before the provider is declared divergent.
pub const DEFAULT_VALIDATION_SUPPORT_CAP: usize = 4096;
/// Off-support tuples probed per (J, M, children).
const OFF_SUPPORT_PROBES: usize = 64;
const GC2_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    /// Finite support: the coefficient vanishes off the enumerated support.
    Gc1,
    /// Orthonormality over the support.
    Gc2,
    /// At most one output m per child configuration.
    Gc4,
    /// Support size bounded; checked by the enumeration cap.
    Gc5,
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub j: HalfInt,
    /// Output m-values involved (two for orthonormality and uniqueness failures).
    pub ms: Vec<HalfInt>,
    pub children_j: Vec<HalfInt>,
    /// Child m-values of the witness, when one tuple is responsible.
    pub children_m: Vec<HalfInt>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub provider: String,
    pub bound: i64,
    pub combinations_checked: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn violations_of(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

fn cartesian(sets: &[Vec<HalfInt>]) -> Vec<Vec<HalfInt>> {
    sets.iter().fold(vec![vec![]], |acc, set| {
        acc.into_iter()
            .flat_map(|t| {
                set.iter().map(move |&x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect()
    })
}

/// Checks orthonormality, finite support and unique output m for every label combination whose
/// doubled values stay within `bound`.
pub fn validate_axioms(provider: &dyn CouplingProvider, bound: HalfInt) -> Result<AxiomReport> {
    validate_axioms_capped(provider, bound, DEFAULT_VALIDATION_SUPPORT_CAP)
}

pub fn validate_axioms_capped(
    provider: &dyn CouplingProvider,
    bound: HalfInt,
    support_cap: usize,
) -> Result<AxiomReport> {
    let b = bound.doubled();
    if b < 0 {
        return Err(Error::InvalidArgument("label bound must be nonnegative".into()));
    }
    let k = provider.arity();
    let js = provider.j_labels(b);
    let child_js = cartesian(&vec![js.clone(); k]);
    let mut report =
        AxiomReport { provider: provider.name(), bound: b, combinations_checked: 0, violations: Vec::new() };

    for &j in &js {
        let out_ms = provider.m_labels(j, b);
        for cjs in &child_js {
            let admissible: Vec<HalfInt> = out_ms.iter().copied().filter(|&m| provider.admits(j, m, cjs)).collect();
            if admissible.is_empty() {
                continue;
            }
            report.combinations_checked += 1;
            let child_ms: Vec<Vec<HalfInt>> = cjs.iter().map(|&cj| provider.m_labels(cj, b)).collect();
            let all_tuples = cartesian(&child_ms);
            let pairs =
                |t: &[HalfInt]| -> Vec<(HalfInt, HalfInt)> { cjs.iter().copied().zip(t.iter().copied()).collect() };

            let mut supports = Vec::with_capacity(admissible.len());
            for &m in &admissible {
                let mut support = BTreeSet::new();
                for (n, t) in provider.support(j, m, cjs).enumerate() {
                    if n >= support_cap {
                        return Err(Error::SupportOverflow {
                            cap: support_cap,
                            labels: format!("J = {j}, M = {m}, children {cjs:?}"),
                        });
                    }
                    support.insert(t);
                }
                for t in all_tuples.iter().filter(|t| !support.contains(*t)).take(OFF_SUPPORT_PROBES) {
                    if !provider.value(j, m, &pairs(t)).is_zero() {
                        report.violations.push(Violation {
                            axiom: Axiom::Gc1,
                            j,
                            ms: vec![m],
                            children_j: cjs.clone(),
                            children_m: t.clone(),
                            detail: "nonzero coefficient outside the enumerated support".into(),
                        });
                    }
                }
                supports.push(support);
            }

            for (a, &ma) in admissible.iter().enumerate() {
                for (bi, &mb) in admissible.iter().enumerate().skip(a) {
                    let union: BTreeSet<&Vec<HalfInt>> = supports[a].iter().chain(supports[bi].iter()).collect();
                    let s: Complex64 = union
                        .into_iter()
                        .map(|t| {
                            let p = pairs(t);
                            provider.value(j, ma, &p).to_complex() * provider.value(j, mb, &p).to_complex().conj()
                        })
                        .sum();
                    let expect = if a == bi { 1.0 } else { 0.0 };
                    if (s - Complex64::new(expect, 0.0)).norm() > GC2_TOLERANCE {
                        report.violations.push(Violation {
                            axiom: Axiom::Gc2,
                            j,
                            ms: vec![ma, mb],
                            children_j: cjs.clone(),
                            children_m: vec![],
                            detail: format!("overlap {s} where {expect} was expected"),
                        });
                    }
                }
            }

            for t in &all_tuples {
                let p = pairs(t);
                let nonzero: Vec<HalfInt> =
                    out_ms.iter().copied().filter(|&m| !provider.value(j, m, &p).is_zero()).collect();
                if nonzero.len() > 1 {
                    report.violations.push(Violation {
                        axiom: Axiom::Gc4,
                        j,
                        ms: nonzero.clone(),
                        children_j: cjs.clone(),
                        children_m: t.clone(),
                        detail: format!("{} output m-values share these children", nonzero.len()),
                    });
                } else if provider.gc4_capable() {
                    let claimed = provider.unique_m(j, &p);
                    if let Some(&m) = nonzero.first() {
                        if claimed != Some(m) {
                            report.violations.push(Violation {
                                axiom: Axiom::Gc4,
                                j,
                                ms: vec![m],
                                children_j: cjs.clone(),
                                children_m: t.clone(),
                                detail: format!("unique_m reported {claimed:?}"),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(report)
}
