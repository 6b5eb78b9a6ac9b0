//! High-precision evaluation of `L(Δ, s) = Σ τ(n) n^{-s}` at integers and
//! verification of the integral and q-series identities it satisfies.

pub mod error;
pub mod identities;
pub mod precision;
pub mod qexpansion;
pub mod quadrature;
pub mod report;
pub mod special;

pub use error::{Error, Result};
pub use precision::{BigReal, PrecCtx, UnitPoint};
pub use report::{Policy, Status, VerificationReport};
