//! Exact modular data over cyclotomic fields.
//!
//! The crate represents the `S` and `T` matrices of a rational conformal
//! field theory exactly, evaluates the associated representation of
//! `SL(2, Z)`, and checks arithmetic properties: Galois symmetry, congruence
//! level, Bantay's `Λ` matrices and cyclic permutation orbifold entries.

pub mod cyclo;
pub mod error;
pub mod galois;
pub mod lambda;
pub mod matrix;
pub mod modrep;
pub mod modular_data;
pub mod orbifold;
pub mod report;

pub use cyclo::{parse_rational, rat, CycloNum, Rational};
pub use error::{Error, Result};
pub use matrix::CMatrix;
pub use report::{CheckRecord, Report};
