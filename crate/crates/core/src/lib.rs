//! Return-time combinatorics of minimal Z^d-actions on the Cantor set and
//! finite-scale criteria for rotation factors on T^d and T^1.
//!
//! The crate is `no_std` (with `alloc`). Everything here is pure
//! computation over finite windows of Z^d; file formats, configuration and
//! the command line live in the `rotfactor` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod generators;
pub mod geometry;
pub mod hierarchy;
pub mod point;
pub mod rotation;
pub mod scalar;
pub mod torus;

pub use error::{Error, Result};
pub use point::{Point, Window, MAX_DIM};
pub use scalar::{Rational, Scalar};
pub use torus::{c_map, c_map_1, c_map_d, torus_distance, Magnitude, ThetaVector, TorusKind, TorusPoint};
