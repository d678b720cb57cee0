//! Foundations of matroids and morphisms of pastures.
#![allow(clippy::needless_range_loop)]
pub mod error;
pub mod field;
pub mod foundation;
pub mod matroid;
pub mod morphism;
pub mod pasture;
pub mod representation;
pub mod zlattice;
pub use error::{Error, Result};
