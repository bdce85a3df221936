//! Dense linear algebra and polynomial root finding.

pub mod eig;
pub mod expm;
pub mod matrix;
pub mod nullspace;
pub mod optimize;
pub mod roots;
pub mod solve;
pub mod svd;
pub mod vector;

pub use eig::{sym_eig, SymEig};
pub use expm::exp_operator;
pub use matrix::{LinearOperator, Matrix};
pub use nullspace::joint_nullspace;
pub use optimize::{nelder_mead, NelderMeadOptions, NelderMeadResult};
pub use roots::{real_roots, UnivariatePolynomial};
pub use solve::solve;
pub use svd::{svd, Svd};
pub use vector::{sort_desc, sorted_desc};
