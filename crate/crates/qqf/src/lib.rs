//! Exact-arithmetic toolkit for finite-dimensional Lie superalgebras with
//! quasi-Frobenius (graded symplectic) and quadratic structures: validation,
//! invariants, double and planar extensions, their converse reductions, and
//! a small catalog of certified examples.

pub mod catalog;
pub mod doc;
pub mod error;
pub mod extensions;
pub mod liesuper;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod structures;
pub mod superlinalg;
