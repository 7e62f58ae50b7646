//! Exact angular-momentum coupling, coupled-state evaluation and sampling, and synthesis of
//! Schur-transform and permutational-quantum-computing circuits.

pub mod angular;
pub mod circuit;
pub mod coupling;
pub mod ct;
pub mod error;
pub mod gt;
pub mod halfint;
pub mod pqc;
pub mod radical;
pub mod scalar;
pub mod sim;

pub use angular::{clebsch_gordan, recoupling_tensor, triangular_delta, wigner_3j, wigner_6j, SixJLabel};
pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use radical::RadicalRational;
pub use scalar::Scalar;
