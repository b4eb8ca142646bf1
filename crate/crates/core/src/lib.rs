//! Exact computation engine for symmetric tensor fields of the form
//! polynomial × exp(−|x|²) on Rⁿ.
//!
//! The crate implements the momentum ray transforms `I^q` / `J^q`, the
//! Saint Venant operator `W`, its generalization `W^k`, the alternated
//! derivative operator `R`, and the John operator acting on formal
//! combinations of ray-transform data. All of it runs on exact rational
//! coefficients, so identities between these objects can be certified
//! by literal equality instead of floating point tolerances.
//!
//! Modules:
//! - [`symtensor`]: symmetric / block-symmetric storage and index algebra.
//! - [`polygauss`]: rational polynomials times the Gaussian, exact line moments.
//! - [`diffops`]: `d`, `W`, `W^k`, `R` and the conversions between `R` and `W`.
//! - [`moments`]: the transforms, moment expressions, and identity evaluators.
//! - [`verify`]: seeded suites, field (de)serialization, reports and CLI.

pub mod diffops;
pub mod error;
pub mod moments;
pub mod mutation;
pub mod polygauss;
pub mod symtensor;
pub mod verify;

pub use error::{Error, Result};
pub use polygauss::{ExactReal, PolyGauss, Polynomial, Rational};
pub use symtensor::{BiSymStorage, IndexTuple, RawTensor, Scalar, SymStorage};

/// Symmetric tensor field with polynomial × Gaussian components.
pub type SymField = SymStorage<PolyGauss>;
/// Field with two independently symmetric index groups.
pub type BiSymField = BiSymStorage<PolyGauss>;
