//! Exact construction and invariantization of hypergeometric D-module
//! systems: GKZ, lattice-basis binomial, Horn and normalized Horn.

pub mod classify;
pub mod discriminant;
pub mod error;
pub mod fixtures;
pub mod invariant;
pub mod lattice;
pub mod matrix;
pub mod poly;
pub mod polytope;
pub mod rational;
pub mod series;
pub mod systems;
pub mod weyl;

pub use error::{Error, Result};
pub use matrix::IntMat;
pub use rational::Q;
