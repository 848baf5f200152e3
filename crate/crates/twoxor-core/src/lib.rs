//! Exact and asymptotic machinery for the distribution of Boolean functions
//! computed by random 2-Xor expressions.
//!
//! Expressions over `n` variables with `m` clauses are in bijection with
//! multigraphs on `n` vertices whose loops carry 4 colours and whose edges
//! carry 8; everything here is built on that correspondence.
//!
//! The crate is `no_std` (it needs `alloc`). IO, the CLI, parallel Monte
//! Carlo and the exhaustive oracle live in the `twoxor` companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod asymptotics;
pub mod census;
pub mod modular;
pub mod multigraph;
pub mod partition;
pub mod rational;
pub mod series;
pub mod special;
pub mod xor;

pub use num_bigint::{BigInt, BigUint};
pub use num_rational::BigRational;
