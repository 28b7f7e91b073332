//! Numerical tools for the discrete defocusing modified KdV lattice
//! `dq_n/dt = (1 - q_n^2)(q_{n+1} - q_{n-1})`.

pub mod error;
pub mod gamma;
pub mod harness;
pub mod lattice;
pub mod mat2;
pub mod model;
pub mod phase;
pub mod quadrature;
pub mod scattering;
pub mod weights;

pub use error::{Error, Result};
