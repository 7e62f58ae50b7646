use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A multiple of one half, stored as its double.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);
    pub const ONE: HalfInt = HalfInt(2);

    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt(doubled)
    }

    pub const fn from_int(value: i64) -> Self {
        HalfInt(2 * value)
    }

    pub const fn doubled(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    /// `2j + 1` for a j-value.
    pub fn multiplicity(self) -> i64 {
        self.0 + 1
    }

    /// The integer value, if there is one.
    pub fn as_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    /// All m-values for this j, from `-j` up to `j`.
    pub fn m_values(self) -> impl DoubleEndedIterator<Item = HalfInt> + Clone {
        let j = self.0;
        (0..=j.max(-1)).map(move |k| HalfInt(-j + 2 * k))
    }
}

/// Checks the (j, m) pairing rule: |m| ≤ j and m ≡ j mod 1.
pub fn valid_pair(j: HalfInt, m: HalfInt) -> bool {
    j.0 >= 0 && m.0.abs() <= j.0 && (j.0 - m.0).rem_euclid(2) == 0
}

pub(crate) fn check_j(j: HalfInt) -> Result<()> {
    if j.0 < 0 {
        return Err(Error::InvalidArgument(format!("negative j-value {j}")));
    }
    Ok(())
}

pub(crate) fn check_pair(j: HalfInt, m: HalfInt) -> Result<()> {
    if !valid_pair(j, m) {
        return Err(Error::InvalidArgument(format!("invalid (j, m) pair ({j}, {m})")));
    }
    Ok(())
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl std::iter::Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        HalfInt(iter.map(|h| h.0).sum())
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `3`, `-1/2`, `3/2` or a decimal such as `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidArgument(format!("cannot parse `{s}` as a half-integer"));
        if let Some((num, den)) = s.split_once('/') {
            let num: i64 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(HalfInt(2 * num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(bad()),
            }
        } else if let Ok(v) = s.parse::<i64>() {
            Ok(HalfInt(2 * v))
        } else {
            let v: f64 = s.parse().map_err(|_| bad())?;
            let d = (2.0 * v).round();
            if (2.0 * v - d).abs() > 1e-12 {
                return Err(bad());
            }
            Ok(HalfInt(d as i64))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for d in -9..=9 {
            let h = HalfInt::from_doubled(d);
            assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
        }
        assert_eq!("1.5".parse::<HalfInt>().unwrap(), HalfInt::from_doubled(3));
        assert!("1/3".parse::<HalfInt>().is_err());
    }

    #[test]
    fn pairing_rule() {
        assert!(valid_pair(HalfInt::HALF, -HalfInt::HALF));
        assert!(!valid_pair(HalfInt::ONE, HalfInt::HALF));
        assert!(!valid_pair(HalfInt::HALF, HalfInt::from_doubled(3)));
        assert_eq!(HalfInt::ONE.m_values().count(), 3);
    }
}
