//! Finite-dimensional ladder operators as dense complex matrices.
//!
//! The crate builds truncated bosons, truncated quons (under the quon-like and
//! the boson-like number rule), their pseudo-deformations by non-unitary
//! similarity, and weighted ladder operators on closed chains, together with
//! the discrete coherent states and biorthogonal duals of a general matrix.
//! Every algebraic identity of these families can be checked numerically and
//! collected into a machine-readable [`report::VerificationReport`].

pub mod chain;
pub mod config;
pub mod error;
pub mod linalg;
pub mod matrix_io;
pub mod pseudo;
pub mod quon;
pub mod report;
pub mod suite;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, ComplexVector, C64};
