//! Exact SU(2) coupling coefficients by the Racah closed forms.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::{check_j, check_pair, HalfInt};
use crate::radical::RadicalRational;

/// Largest doubled j accepted when no other bound was configured.
pub const DEFAULT_MAX_DOUBLED_J: i64 = 512;

struct FactorialTable {
    max_doubled_j: i64,
    values: Vec<BigInt>,
}

static FACTORIALS: OnceLock<FactorialTable> = OnceLock::new();

fn build_table(max_doubled_j: i64) -> FactorialTable {
    // The 6j sum reaches (j1+j2+j4+j5+1)!, i.e. 2 * max_doubled_j + 1.
    let len = (2 * max_doubled_j + 2) as usize;
    let mut values = Vec::with_capacity(len);
    let mut acc = BigInt::one();
    values.push(acc.clone());
    for k in 1..len {
        acc *= k;
        values.push(acc.clone());
    }
    FactorialTable { max_doubled_j, values }
}

/// Fixes the largest doubled j-value the coefficient engine accepts.
///
/// Only effective before the first coefficient is evaluated; returns the bound in force.
pub fn configure_label_bound(max_doubled_j: i64) -> i64 {
    FACTORIALS.get_or_init(|| build_table(max_doubled_j.max(2))).max_doubled_j
}

/// The doubled-j bound currently in force.
pub fn label_bound() -> i64 {
    table().max_doubled_j
}

fn table() -> &'static FactorialTable {
    FACTORIALS.get_or_init(|| build_table(DEFAULT_MAX_DOUBLED_J))
}

fn fact(n: i64) -> &'static BigInt {
    &table().values[n as usize]
}

fn check_bound(js: &[HalfInt]) -> Result<()> {
    let bound = label_bound();
    for j in js {
        if j.doubled().abs() > bound {
            return Err(Error::CapExceeded(format!("label {j} beyond doubled bound {bound}")));
        }
    }
    Ok(())
}

fn triangle(a: i64, b: i64, c: i64) -> bool {
    a >= (b - c).abs() && a <= b + c && (a + b + c) % 2 == 0
}

/// 1 when `alpha` lies in {|beta-gamma|, ..., beta+gamma}, 0 otherwise.
pub fn triangular_delta(alpha: HalfInt, beta: HalfInt, gamma: HalfInt) -> Result<u8> {
    for j in [alpha, beta, gamma] {
        check_j(j)?;
    }
    Ok(triangle(alpha.doubled(), beta.doubled(), gamma.doubled()) as u8)
}

fn parity_sign(exponent: i64) -> i8 {
    if exponent.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)! from doubled arguments satisfying the triangle rule.
fn delta_sq(a: i64, b: i64, c: i64) -> BigRational {
    BigRational::new(
        fact((a + b - c) / 2) * fact((a - b + c) / 2) * fact((-a + b + c) / 2),
        fact((a + b + c) / 2 + 1).clone(),
    )
}

fn signed(sign: i8, s: &BigRational, radicand: BigRational) -> RadicalRational {
    if s.is_zero() {
        return RadicalRational::zero();
    }
    let sign = if s.is_negative() { -sign } else { sign };
    RadicalRational::new(sign, s * s * radicand)
}

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3).
pub fn wigner_3j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m3: HalfInt,
) -> Result<RadicalRational> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j3, m3)?;
    check_bound(&[j1, j2, j3])?;
    if (m1 + m2 + m3) != HalfInt::ZERO || !triangle(j1.doubled(), j2.doubled(), j3.doubled()) {
        return Ok(RadicalRational::zero());
    }
    // Every combination below is an integer once the pairing and triangle rules hold.
    let int = |x: HalfInt| x.doubled() / 2;
    let j12_3 = int(j1 + j2 - j3);
    let radicand = delta_sq(j1.doubled(), j2.doubled(), j3.doubled())
        * BigRational::from_integer(
            fact(int(j1 + m1))
                * fact(int(j1 - m1))
                * fact(int(j2 + m2))
                * fact(int(j2 - m2))
                * fact(int(j3 + m3))
                * fact(int(j3 - m3)),
        );

    let s1 = int(j3 - j2 + m1);
    let s2 = int(j3 - j1 - m2);
    let s3 = int(j1 - m1);
    let s4 = int(j2 + m2);
    let k_min = 0.max(-s1).max(-s2);
    let k_max = j12_3.min(s3).min(s4);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den = fact(k) * fact(s1 + k) * fact(s2 + k) * fact(j12_3 - k) * fact(s3 - k) * fact(s4 - k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let sign = parity_sign((j1 - j2 - m3).doubled() / 2);
    Ok(signed(sign, &sum, radicand))
}

/// Clebsch-Gordan coefficient <j1 m1; j2 m2 | J M> in the Condon-Shortley convention.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j: HalfInt,
    m: HalfInt,
) -> Result<RadicalRational> {
    check_pair(j1, m1)?;
    check_pair(j2, m2)?;
    check_pair(j, m)?;
    let three_j = wigner_3j(j1, j2, j, m1, m2, -m)?;
    if three_j.is_zero() {
        return Ok(three_j);
    }
    let phase = parity_sign((j2 - j1 - m).doubled() / 2);
    Ok(RadicalRational::new(phase, BigRational::from_integer(BigInt::from(j.multiplicity()))) * three_j)
}

/// Arguments of a 6j symbol displayed as {a b f; c e d}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SixJLabel {
    pub a: HalfInt,
    pub b: HalfInt,
    pub f: HalfInt,
    pub c: HalfInt,
    pub e: HalfInt,
    pub d: HalfInt,
}

impl SixJLabel {
    /// Entries in display order: top row `a b f`, bottom row `c e d`.
    pub fn new(a: HalfInt, b: HalfInt, f: HalfInt, c: HalfInt, e: HalfInt, d: HalfInt) -> Self {
        SixJLabel { a, b, f, c, e, d }
    }

    pub fn from_doubled(v: [i64; 6]) -> Self {
        let h = HalfInt::from_doubled;
        SixJLabel::new(h(v[0]), h(v[1]), h(v[2]), h(v[3]), h(v[4]), h(v[5]))
    }

    fn entries(&self) -> [HalfInt; 6] {
        [self.a, self.b, self.f, self.c, self.e, self.d]
    }

    /// The four triads whose triangle conditions the symbol needs.
    pub fn triads(&self) -> [[HalfInt; 3]; 4] {
        [[self.a, self.b, self.f], [self.c, self.e, self.f], [self.a, self.e, self.d], [self.c, self.b, self.d]]
    }
}

/// Wigner 6j symbol.
pub fn wigner_6j(label: SixJLabel) -> Result<RadicalRational> {
    for j in label.entries() {
        check_j(j)?;
    }
    check_bound(&label.entries())?;
    if label.triads().iter().any(|t| !triangle(t[0].doubled(), t[1].doubled(), t[2].doubled())) {
        return Ok(RadicalRational::zero());
    }
    let [j1, j2, j3, j4, j5, j6] = label.entries().map(|x| x.doubled());
    let half = |x: i64| x / 2;
    let radicand = delta_sq(j1, j2, j3) * delta_sq(j1, j5, j6) * delta_sq(j4, j2, j6) * delta_sq(j4, j5, j3);
    let alphas = [half(j1 + j2 + j3), half(j1 + j5 + j6), half(j4 + j2 + j6), half(j4 + j5 + j3)];
    let betas = [half(j1 + j2 + j4 + j5), half(j1 + j3 + j4 + j6), half(j2 + j3 + j5 + j6)];
    let t_min = *alphas.iter().max().unwrap();
    let t_max = *betas.iter().min().unwrap();
    let mut sum = BigRational::zero();
    for t in t_min..=t_max {
        let mut den = BigInt::one();
        for a in alphas {
            den *= fact(t - a);
        }
        for b in betas {
            den *= fact(b - t);
        }
        let term = BigRational::new(fact(t + 1).clone(), den);
        if t % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    Ok(signed(1, &sum, radicand))
}

/// [a b f; c e d] = (-1)^(a+b+c+e) sqrt((2d+1)(2f+1)) {a b f; c e d}.
pub fn recoupling_tensor(label: SixJLabel) -> Result<RadicalRational> {
    for j in label.entries() {
        check_j(j)?;
    }
    let exponent = label.a + label.b + label.c + label.e;
    if !exponent.is_integer() {
        return Err(Error::InvalidArgument(format!("phase exponent a+b+c+e = {exponent} is not an integer")));
    }
    let six_j = wigner_6j(label)?;
    let dims = BigInt::from(label.d.multiplicity() * label.f.multiplicity());
    let phase = parity_sign(exponent.doubled() / 2);
    Ok(RadicalRational::new(phase, BigRational::from_integer(dims)) * six_j)
}
