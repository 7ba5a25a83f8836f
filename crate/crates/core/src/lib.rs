pub mod certified;
pub mod cli;
pub mod digits;
pub mod dynamics;
pub mod error;
pub mod fractal;
pub mod geometry;
mod nat;
pub mod solver;

pub use digits::{BigNatural, DigitSetSpec, FracExpansion, FracPoint};
pub use error::{Error, Result};
