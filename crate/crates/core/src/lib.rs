//! Exact quantum-torus algebra for skein coordinates of marked surfaces.
#![allow(clippy::needless_range_loop)]

pub mod center;
pub mod chebyshev;
pub mod cli;
pub mod error;
pub mod exec;
pub mod flips;
pub mod frobenius;
pub mod qtorus;
pub mod random;
pub mod scalars;
pub mod surface;
pub mod surgery;

pub use error::{Error, Result};
