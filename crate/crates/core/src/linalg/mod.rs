//! Dense complex linear algebra for small Hermitian problems.
//!
//! Eigendecomposition, matrix exponential, logarithm and square root. Sized
//! for the dimensions this crate needs (up to a few dozen).

mod eigen;
mod functions;
mod matrix;
mod real;

pub use eigen::{hermitian_eig, EigenSystem};
pub use functions::{matrix_exp_hermitian, matrix_log_psd, matrix_sqrt_psd};
pub use matrix::ComplexMatrix;
pub use real::solve_real;
