//! Deformation classification of irreducible simple plane sextics via lattice arithmetic.

pub mod arith;
pub mod classify;
pub mod data;
pub mod degen;
pub mod error;
pub mod fqf;
pub mod intmat;
pub mod lattices;
pub mod mm;
pub mod nikulin;
pub mod verify;

pub use error::{Error, Result};
