//! Square roots in GF(p) by exponentiation in GF(p^3), alongside the
//! Cipolla-Lehmer method, Tonelli-Shanks, and quadratic-sum methods.
//!
//! The crate also ships a sweep harness for conjectured identities of the
//! GF(p^3) square-root function and a small benchmark driver.

pub mod bench;
pub mod conjecture;
pub mod error;
pub mod ext;
pub mod field;
pub mod qsum;
pub mod sqrt;

pub use error::{Error, Result};
pub use field::{FieldCtx, FieldOptions, Fp};
pub use sqrt::SqrtOutcome;
