//! Differential equation of modular addition: solvers, three permutation-diffusion
//! image ciphers, and the plaintext attacks that recover their keys.

pub mod attacks;
pub mod ciphers;
pub mod dea;
mod error;
pub mod experiments;
pub mod image;
pub mod imageio;
pub mod keysched;
pub mod net;
pub mod report;
pub mod solvers;
pub mod tables;

pub use error::{Error, Result};
