//! Complex linear-algebra primitives used by the solvers.

pub mod dft;
pub mod householder;
pub mod hpd;
pub mod matrix;
pub mod quartic;
pub mod vector;

pub use dft::{dft, idft, idft_direct, idft_fast, right_mul_idft};
pub use householder::{unitary_completion, UnitaryCompletion};
pub use hpd::{hpd_solve, Cholesky};
pub use matrix::ComplexMatrix;
pub use quartic::{eval_quartic, real_quartic_roots};
pub use vector::ComplexVector;
