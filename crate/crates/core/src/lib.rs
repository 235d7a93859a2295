//! Exact-arithmetic vertex functions for the zero-dimensional type-A quiver
//! varieties attached to partitions: product and localization forms,
//! Macdonald-operator descendant insertions, capped vertex expressions,
//! stability chambers with tautological-bundle characters, and numerical
//! monodromy of the associated q-difference equation.
//!
//! The crate is `no_std` + `alloc`; IO, the CLI, and file formats live in
//! the companion `quivertex-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod qseries;
pub mod partitions;
pub mod vertex;
pub mod chambers;
pub mod monodromy;
pub mod selftest;

pub use error::{Error, Result};
