//! Exact linear algebra over ℚ and prime fields.

pub mod enumerate;
pub mod field;
pub mod matrix;
pub mod subspace;

pub use enumerate::{all_matrices, all_subspaces, all_vectors, enumerate_subspaces, general_linear};
pub use field::{ExactField, Scalar};
pub use matrix::{Echelon, Matrix};
pub use subspace::{complement_in, kernel, unit_vector, Subspace};
