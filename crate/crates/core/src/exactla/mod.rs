//! Exact linear algebra over Q and prime fields.

pub mod complex;
pub mod elim;
pub mod field;
pub mod sparse;

pub use complex::{induced_rank, Boundary, BoundedComplex};
pub use elim::{inverse, kernel_basis, rank, rank_of, solve, Echelon};
pub use field::{reduce_mod_p, Field, Scalar};
pub use sparse::{SparseMatrix, Vector};
