use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::radical::RadicalRational;

/// A coefficient that keeps an exact real carrier whenever one is available.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Exact(RadicalRational),
    Float(Complex64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(RadicalRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(RadicalRational::one())
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(r) => Complex64::new(r.to_f64(), 0.0),
            Scalar::Float(c) => *c,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(c) => *c == Complex64::new(0.0, 0.0),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&RadicalRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    /// |z|^2, exact when the carrier is.
    pub fn norm_sqr_exact(&self) -> Option<BigRational> {
        self.as_exact().map(RadicalRational::square)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.to_complex().norm_sqr()
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_complex() * rhs.to_complex()),
        }
    }
}

impl From<RadicalRational> for Scalar {
    fn from(r: RadicalRational) -> Self {
        Scalar::Exact(r)
    }
}

impl From<Complex64> for Scalar {
    fn from(c: Complex64) -> Self {
        Scalar::Float(c)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(c) => write!(f, "{c}"),
        }
    }
}
