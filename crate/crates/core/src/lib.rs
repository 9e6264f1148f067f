//! Exact computations with finite-dimensional Lie algebras over `Q` and
//! `GF(p)`: derived series, derivation algebras, solvable radicals, the
//! ideals `I + D(I) + ... + D^k(I)`, and checkers for the derived-length
//! bounds these ideals satisfy.

pub mod bounds;
pub mod campaign;
pub mod cli;
pub mod constructions;
pub mod derivation;
pub mod error;
pub mod format;
pub mod liealg;
pub mod linalg;
pub mod radical;
pub mod report;
pub mod scalar;

pub use derivation::DerivationMap;
pub use error::{Error, Result};
pub use liealg::{IdealHandle, LieAlgebra, Violation};
pub use linalg::{Matrix, Subspace};
pub use scalar::{FieldSpec, Scalar};
