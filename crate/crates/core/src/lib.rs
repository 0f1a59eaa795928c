//! Exact and certified computations for divisible points on curves in the
//! algebraic torus: polynomial kernels, algebraic numbers and heights,
//! Newton-polygon approximation certificates, parametrized curves, the
//! intersection with the unit torus, and the lattice-point survey.

pub mod algnum;
pub mod curves;
pub mod arith;
pub mod dyadic;
pub mod edge_approx;
mod error;
pub mod poly;
pub mod survey;
pub mod torus;

pub use algnum::AlgebraicNumber;
pub use error::{Error, Result};
