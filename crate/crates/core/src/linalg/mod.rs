//! Dense complex linear algebra: matrices, products and brackets, LU solves,
//! eigensystems, the matrix exponential and singular values.

pub mod eigen;
pub mod expm;
pub mod lu;
pub mod matrix;
pub mod svd;

pub use eigen::{eigensystem, eigensystem_with, EigenOptions, EigenSystem};
pub use expm::matrix_exponential;
pub use lu::{determinant, inverse, inverse_with_condition, Lu};
pub use matrix::{
    commutator, qmutator, rank_one, real, ComplexMatrix, ComplexVector, C64, I, ONE, ZERO,
};
pub use svd::{singular_values, smallest_singular_value};
