use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

/// An exact real number `sign * sqrt(radicand)` with a nonnegative rational radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RadicalRational {
    sign: i8,
    radicand: BigRational,
}

impl RadicalRational {
    pub fn zero() -> Self {
        RadicalRational { sign: 0, radicand: BigRational::zero() }
    }

    pub fn one() -> Self {
        RadicalRational { sign: 1, radicand: BigRational::one() }
    }

    /// `sign * sqrt(radicand)`. A zero sign or radicand yields zero.
    ///
    /// # Panics
    /// If the radicand is negative.
    pub fn new(sign: i8, radicand: BigRational) -> Self {
        assert!(!radicand.is_negative(), "radicand must be nonnegative");
        if sign == 0 || radicand.is_zero() {
            return Self::zero();
        }
        RadicalRational { sign: sign.signum(), radicand }
    }

    pub fn from_ratio(sign: i8, num: i64, den: i64) -> Self {
        Self::new(sign, BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// The rational number `q` itself, written as `sign(q) * sqrt(q^2)`.
    pub fn from_rational(q: &BigRational) -> Self {
        let sign = match q.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        };
        Self::new(sign, q * q)
    }

    pub fn from_integer(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// Exact square, `sign^2 * radicand`.
    pub fn square(&self) -> BigRational {
        if self.sign == 0 {
            BigRational::zero()
        } else {
            self.radicand.clone()
        }
    }

    /// Exact square root of a nonnegative rational.
    pub fn sqrt(q: BigRational) -> Self {
        Self::new(1, q)
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let r = self.radicand.to_f64().unwrap_or(f64::INFINITY);
        self.sign as f64 * r.sqrt()
    }
}

impl Mul for &RadicalRational {
    type Output = RadicalRational;
    fn mul(self, rhs: &RadicalRational) -> RadicalRational {
        if self.sign == 0 || rhs.sign == 0 {
            return RadicalRational::zero();
        }
        RadicalRational { sign: self.sign * rhs.sign, radicand: &self.radicand * &rhs.radicand }
    }
}

impl Mul for RadicalRational {
    type Output = RadicalRational;
    fn mul(self, rhs: RadicalRational) -> RadicalRational {
        &self * &rhs
    }
}

impl Neg for RadicalRational {
    type Output = RadicalRational;
    fn neg(self) -> RadicalRational {
        RadicalRational { sign: -self.sign, radicand: self.radicand }
    }
}

impl fmt::Display for RadicalRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*sqrt({}/{})", self.sign, self.radicand.numer(), self.radicand.denom())
    }
}

fn big_to_json(v: &BigInt) -> serde_json::Value {
    match v.to_u64() {
        Some(u) => serde_json::Value::from(u),
        None => serde_json::Value::from(v.to_string()),
    }
}

fn json_to_big(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_u64().map(BigInt::from).or_else(|| n.as_i64().map(BigInt::from)),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for RadicalRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("RadicalRational", 3)?;
        st.serialize_field("sign", &self.sign)?;
        st.serialize_field("num", &big_to_json(self.radicand.numer()))?;
        st.serialize_field("den", &big_to_json(self.radicand.denom()))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for RadicalRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            sign: i8,
            num: serde_json::Value,
            den: serde_json::Value,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num = json_to_big(&raw.num).ok_or_else(|| de::Error::custom("bad radicand numerator"))?;
        let den = json_to_big(&raw.den).ok_or_else(|| de::Error::custom("bad radicand denominator"))?;
        if den.is_zero() || num.is_negative() || den.is_negative() || !(-1..=1).contains(&raw.sign) {
            return Err(de::Error::custom("radicand must be a nonnegative fraction"));
        }
        Ok(RadicalRational::new(raw.sign, BigRational::new(num, den)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_and_display() {
        let r = RadicalRational::from_ratio(-1, 2, 4);
        assert_eq!(r.to_string(), "-1*sqrt(1/2)");
        assert_eq!(r.square(), BigRational::new(1.into(), 2.into()));
        assert!(RadicalRational::from_ratio(1, 0, 3).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let r = RadicalRational::from_ratio(-1, 3, 8);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, r#"{"sign":-1,"num":3,"den":8}"#);
        assert_eq!(serde_json::from_str::<RadicalRational>(&s).unwrap(), r);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn product_matches_float(
            s1 in prop::sample::select(vec![-1i8, 1]), n1 in 1i64..1_000_000, d1 in 1i64..1_000_000,
            s2 in prop::sample::select(vec![-1i8, 1]), n2 in 1i64..1_000_000, d2 in 1i64..1_000_000,
        ) {
            let a = RadicalRational::from_ratio(s1, n1, d1);
            let b = RadicalRational::from_ratio(s2, n2, d2);
            let exact = (&a * &b).to_f64();
            let float = a.to_f64() * b.to_f64();
            prop_assert!((exact - float).abs() <= 1e-14 * float.abs());
        }
    }
}
