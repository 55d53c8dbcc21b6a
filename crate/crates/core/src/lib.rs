//! Boundary spectra, eta invariants, index classes and heat-trace asymptotics
//! for punctured surfaces with parabolic weight systems.

pub mod chern;
pub mod cli;
pub mod error;
pub mod eta;
pub mod heat;
pub mod parabolic;
pub mod quad;
pub mod rational;
pub mod specfun;
pub mod spectrum;

pub use error::{Error, Result};
