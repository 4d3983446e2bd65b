//! Symbolic Grassmann calculus and Lagrangian mechanics on coordinate
//! superdomains.
//!
//! Everything here is exact: coefficients are rational functions (optionally
//! with `sin`/`cos`/`exp` kernels) over arbitrary-precision rationals, odd
//! coordinates are handled as Grassmann generators, and every identity the
//! crate checks is decided by normalizing a residual to zero.

#![no_std]

extern crate alloc;

pub mod charts;
pub mod error;
pub mod fields;
pub mod legendre;
pub mod forms;
pub mod mechanics;
pub mod scalar;
pub mod superalgebra;
#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use scalar::{Rational, ScalarError, ScalarExpr};
pub use superalgebra::{Chart, CoordinateSystem, GradedMatrix, Parity, Role, SuperFunction};
