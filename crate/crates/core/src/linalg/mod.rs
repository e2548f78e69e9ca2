//! Exact integer linear algebra: Smith normal form, rank, and integer
//! solvability of linear systems.
//!
//! Small matrices go through a dense Smith normal form that tracks the
//! unimodular transforms. Large sparse boundary matrices, where only the
//! invariant factors are needed, go through unit-pivot sparse elimination
//! first and hand the (usually tiny) remainder to the dense routine.

mod matrix;
mod snf;
mod sparse;

pub use matrix::{DenseMatrix, IntegerMatrix};
pub use snf::{
    dense_invariant_factors, dense_rank, smith_normal_form, smith_normal_form_dense,
    solve_in_image, solve_in_image_dense, SnfResult,
};
pub use sparse::{invariant_factors, rank};
