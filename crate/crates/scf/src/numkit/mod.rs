//! Numeric substrate: dense matrices, stable reductions, seeded
//! randomness, 2-D PCA and a finite-difference gradient checker.
//!
//! Everything here is deterministic. The only mutable state is the
//! generator in [`Rng`], and each thread is expected to own its own.

mod grad;
mod matrix;
mod pca;
mod reduce;
mod rng;

pub use grad::{finite_diff_grad, finite_diff_grad_vec, max_relative_error};
pub use matrix::{dot, l2_normalize_rows, similarity_matrix, Matrix};
pub use pca::{pca_2d, Pca2d};
pub use reduce::log_sum_exp;
pub use rng::Rng;
