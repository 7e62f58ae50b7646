//! Gelfand-Tsetlin patterns for SU(N) irreps, and the explicit SU(3) coupling example.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::coupling::{CouplingProvider, SupportIter};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::radical::RadicalRational;
use crate::scalar::Scalar;

/// Default ceiling on the number of patterns `enumerate_patterns` will produce.
pub const DEFAULT_PATTERN_CAP: u128 = 1 << 20;

/// Highest weight (m_{1,N}, ..., m_{N,N}), normalized so that the last entry is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IrrepLabel(Vec<i64>);

impl IrrepLabel {
    pub fn new(entries: Vec<i64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("irrep label needs at least one entry".into()));
        }
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!("irrep label {entries:?} is not non-increasing")));
        }
        let last = *entries.last().unwrap();
        Ok(IrrepLabel(entries.into_iter().map(|x| x - last).collect()))
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }
}

/// Rows from the top (length N) down to the single entry m_{1,1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GtPattern {
    rows: Vec<Vec<i64>>,
}

impl GtPattern {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n - i {
                return Err(Error::InvalidArgument("pattern rows must shrink by one entry".into()));
            }
        }
        for w in rows.windows(2) {
            let (upper, lower) = (&w[0], &w[1]);
            for k in 0..lower.len() {
                if !(upper[k] >= lower[k] && lower[k] >= upper[k + 1]) {
                    return Err(Error::InvalidArgument("betweenness condition fails".into()));
                }
            }
        }
        Ok(GtPattern { rows })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// m_{k,l} with 1-based k and l.
    pub fn entry(&self, k: usize, l: usize) -> i64 {
        let n = self.rows.len();
        self.rows[n - l][k - 1]
    }

    /// sigma_l: sum of the row with l entries; sigma_0 = 0.
    pub fn row_sum(&self, l: usize) -> i64 {
        if l == 0 {
            0
        } else {
            let n = self.rows.len();
            self.rows[n - l].iter().sum()
        }
    }
}

impl fmt::Display for GtPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", rows.join(" | "))
    }
}

/// z-weight (lambda_1, ..., lambda_{N-1}).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Rational64>);

impl Weight {
    pub fn zero(len: usize) -> Self {
        Weight(vec![Rational64::from_integer(0); len])
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Dimension of the irrep: the product over k < k' of 1 + (m_k - m_k') / (k' - k).
pub fn dim(label: &IrrepLabel) -> u128 {
    let m = label.entries();
    let n = m.len();
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for k in 0..n {
        for kp in k + 1..n {
            num *= (m[k] - m[kp]) as u128 + (kp - k) as u128;
            den *= (kp - k) as u128;
            let g = gcd(num, den);
            num /= g;
            den /= g;
        }
    }
    num / den
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// All patterns with top row `label`, each row listed before any row with smaller entries in
/// lexicographic order (larger values first).
pub fn enumerate_patterns(label: &IrrepLabel) -> Result<Vec<GtPattern>> {
    enumerate_patterns_capped(label, DEFAULT_PATTERN_CAP)
}

pub fn enumerate_patterns_capped(label: &IrrepLabel, cap: u128) -> Result<Vec<GtPattern>> {
    let d = dim(label);
    if d > cap {
        return Err(Error::CapExceeded(format!("irrep dimension {d} exceeds pattern cap {cap}")));
    }
    let mut out = Vec::with_capacity(d as usize);
    let mut rows = vec![label.entries().to_vec()];
    extend_rows(&mut rows, &mut out);
    Ok(out)
}

fn extend_rows(rows: &mut Vec<Vec<i64>>, out: &mut Vec<GtPattern>) {
    let upper = rows.last().unwrap().clone();
    if upper.len() == 1 {
        out.push(GtPattern { rows: rows.clone() });
        return;
    }
    let mut next = vec![0i64; upper.len() - 1];
    fill(&upper, 0, &mut next, rows, out);
}

fn fill(upper: &[i64], k: usize, next: &mut Vec<i64>, rows: &mut Vec<Vec<i64>>, out: &mut Vec<GtPattern>) {
    if k == next.len() {
        rows.push(next.clone());
        extend_rows(rows, out);
        rows.pop();
        return;
    }
    for v in (upper[k + 1]..=upper[k]).rev() {
        next[k] = v;
        fill(upper, k + 1, next, rows, out);
    }
}

/// lambda_l = sigma_l - (sigma_{l+1} + sigma_{l-1}) / 2 for l = 1, ..., N-1.
pub fn z_weight(pattern: &GtPattern) -> Weight {
    let n = pattern.rows().len();
    Weight(
        (1..n)
            .map(|l| {
                Rational64::from_integer(pattern.row_sum(l))
                    - Rational64::new(pattern.row_sum(l + 1) + pattern.row_sum(l - 1), 2)
            })
            .collect(),
    )
}

/// Opaque label codes used by [`Su3ExampleProvider`].
pub mod su3_codes {
    use crate::halfint::HalfInt;

    /// The fundamental irrep (1,0,0).
    pub const TRIPLET: HalfInt = HalfInt::from_int(1);
    /// The conjugate irrep (1,1,0).
    pub const ANTITRIPLET: HalfInt = HalfInt::from_int(2);
    /// The adjoint irrep (2,1,0).
    pub const OCTET: HalfInt = HalfInt::from_int(3);
    /// First weight-zero octet state: (|1>|3> + |2>|2>)/sqrt(2).
    pub const OCTET_ZERO_A: HalfInt = HalfInt::from_int(1);
    /// Second weight-zero octet state: -|1>|3>/sqrt(6) + |2>|2>/sqrt(6) + sqrt(2/3)|3>|1>.
    pub const OCTET_ZERO_B: HalfInt = HalfInt::from_int(2);

    /// Basis index i = 1, 2, 3 of a triplet or antitriplet state.
    pub const fn state(i: i64) -> HalfInt {
        HalfInt::from_int(i)
    }
}

/// Irrep label behind each SU(3) example code.
pub fn su3_irrep(code: HalfInt) -> Option<IrrepLabel> {
    use su3_codes::*;
    let v = match code {
        c if c == TRIPLET => vec![1, 0, 0],
        c if c == ANTITRIPLET => vec![1, 1, 0],
        c if c == OCTET => vec![2, 1, 0],
        _ => return None,
    };
    IrrepLabel::new(v).ok()
}

/// The two weight-(0,0) states of (2,1,0) inside (1,0,0) x (1,1,0), as a coupling provider.
///
/// Children are a triplet and an antitriplet state indexed 1..3 in pattern-enumeration
/// order; outputs are the two octet states. Both outputs share their nonzero inputs.
#[derive(Debug, Clone, Copy, Default)]
pub struct Su3ExampleProvider;

impl Su3ExampleProvider {
    fn table(m: HalfInt) -> Vec<((i64, i64), RadicalRational)> {
        use su3_codes::*;
        if m == OCTET_ZERO_A {
            vec![((1, 3), RadicalRational::from_ratio(1, 1, 2)), ((2, 2), RadicalRational::from_ratio(1, 1, 2))]
        } else if m == OCTET_ZERO_B {
            vec![
                ((1, 3), RadicalRational::from_ratio(-1, 1, 6)),
                ((2, 2), RadicalRational::from_ratio(1, 1, 6)),
                ((3, 1), RadicalRational::from_ratio(1, 2, 3)),
            ]
        } else {
            vec![]
        }
    }
}

impl CouplingProvider for Su3ExampleProvider {
    fn name(&self) -> String {
        "su3-example".into()
    }

    fn arity(&self) -> usize {
        2
    }

    fn admits(&self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> bool {
        use su3_codes::*;
        j == OCTET && children == [TRIPLET, ANTITRIPLET] && (m == OCTET_ZERO_A || m == OCTET_ZERO_B)
    }

    fn value(&self, j: HalfInt, m: HalfInt, children: &[(HalfInt, HalfInt)]) -> Scalar {
        let js: Vec<HalfInt> = children.iter().map(|c| c.0).collect();
        if !self.admits(j, m, &js) {
            return Scalar::zero();
        }
        let key = (children[0].1.doubled() / 2, children[1].1.doubled() / 2);
        Self::table(m).into_iter().find(|(k, _)| *k == key).map(|(_, v)| Scalar::Exact(v)).unwrap_or_else(Scalar::zero)
    }

    fn support<'a>(&'a self, j: HalfInt, m: HalfInt, children: &[HalfInt]) -> SupportIter<'a> {
        if !self.admits(j, m, children) {
            return Box::new(std::iter::empty());
        }
        Box::new(Self::table(m).into_iter().map(|((a, b), _)| vec![su3_codes::state(a), su3_codes::state(b)]))
    }

    fn j_labels(&self, _bound: i64) -> Vec<HalfInt> {
        use su3_codes::*;
        vec![TRIPLET, ANTITRIPLET, OCTET]
    }

    fn m_labels(&self, j: HalfInt, _bound: i64) -> Vec<HalfInt> {
        use su3_codes::*;
        if j == OCTET {
            vec![OCTET_ZERO_A, OCTET_ZERO_B]
        } else {
            (1..=3).map(state).collect()
        }
    }

    fn spec(&self) -> Option<crate::coupling::ProviderSpec> {
        Some(crate::coupling::ProviderSpec::Su3Example)
    }
}
