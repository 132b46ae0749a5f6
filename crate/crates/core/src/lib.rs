//! Spectral-stability laboratory for monotone shear flows of the 2D Euler equation.

pub mod cli;
pub mod config;
pub mod error;
pub mod evolution;
pub mod flow;
pub mod grid;
pub mod indicators;
pub mod io;
pub mod numerics;
pub mod rayleigh;
pub mod witness;

pub use error::{Error, Result};
