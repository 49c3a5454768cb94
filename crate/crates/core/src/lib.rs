//! Exact evaluation and verification of determinant identities whose entries
//! are powers and products of second-order linear recurrence terms.
//!
//! Everything is computed over arbitrary-precision rationals: the sequences
//! themselves, the closed forms, three determinant engines, and a small
//! polynomial ring for checking the underlying lemmas symbolically.

pub mod closedforms;
pub mod error;
pub mod harness;
pub mod identities;
pub mod matrices;
pub mod scalar;
pub mod sequences;
pub mod sympoly;

pub use closedforms::ClosedFormResult;
pub use error::{Error, Result};
pub use identities::{CatalanFamily, DecompCoeffs, IdentityInstance};
pub use matrices::{ExactMatrix, PowerMatrixSpec, ProductMatrixSpec};
pub use scalar::Scalar;
pub use sequences::{HoradamSequence, RecurrenceParams};
pub use sympoly::MultiPoly;
