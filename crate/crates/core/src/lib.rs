#![no_std]
extern crate alloc;

pub mod error;
pub mod faddeeva;
pub mod kernel;
pub mod params;
pub mod propagators;
pub mod pulse;
pub mod quadrature;
pub mod residue;
pub mod scattering;

pub use error::{Error, Result};
