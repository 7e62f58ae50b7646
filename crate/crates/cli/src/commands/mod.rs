pub mod circuit;
pub mod coupling;
pub mod ct;
pub mod gt;
pub mod pqc;
pub mod sim;

use num_complex::Complex64;
use schur_core::{HalfInt, RadicalRational, Scalar};
use serde_json::{json, Value};

pub fn halves(v: &[HalfInt]) -> String {
    v.iter().map(|h| h.to_string()).collect::<Vec<_>>().join(",")
}

pub fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn radical_json(r: &RadicalRational) -> Value {
    json!({ "exact": r.to_string(), "value": r, "decimal": r.to_f64() })
}

/// Exact form when available, always with a floating value.
pub fn scalar_json(s: &Scalar) -> Value {
    let z = s.to_complex();
    match s.as_exact() {
        Some(r) => json!({ "exact": r.to_string(), "value": r, "re": z.re, "im": z.im }),
        None => json!({ "re": z.re, "im": z.im }),
    }
}

pub fn scalar_text(s: &Scalar) -> String {
    match s.as_exact() {
        Some(r) => r.to_string(),
        None => {
            let z = s.to_complex();
            format!("{}{:+}i", z.re, z.im)
        }
    }
}

/// Labels as strings such as "3/2", so JSON readers need not know about doubling.
pub fn half_json(v: &[HalfInt]) -> Value {
    Value::from(v.iter().map(|h| h.to_string()).collect::<Vec<_>>())
}
