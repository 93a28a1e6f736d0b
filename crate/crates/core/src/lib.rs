//! Exact verification of linear perturbations of Spin(7)-structures.
//!
//! Everything is computed over the number field Q(√2, √3); no floating point
//! enters any check.

pub mod cayley;
pub mod chamber;
pub mod classify;
pub mod endo;
pub mod error;
pub mod exterior;
pub mod harness;
pub mod invariant;
pub mod lie;
pub mod linalg;
pub mod poly;
pub mod random;
pub mod scalar;
pub mod serial;

pub use endo::Endo;
pub use error::{Error, Result};
pub use exterior::{Covector, KForm, MultiIndex, Vector};
pub use scalar::FieldScalar;
