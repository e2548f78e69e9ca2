//! Framed Khovanov homology of link diagrams over the integers.
//!
//! Chain groups are spanned by enhanced Kauffman states and bigraded by
//! `(a, b) = (σ, σ + 2τ)`. The crate computes the bigraded homology table,
//! the unreduced Kauffman bracket (its graded Euler characteristic), and the
//! long exact sequence obtained by splitting the complex at one crossing.

pub mod bracket;
pub mod cli;
pub mod complex;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod les;
pub mod linalg;
pub mod poly;
pub mod resolution;
pub mod torus;

pub use error::{Error, Result};
