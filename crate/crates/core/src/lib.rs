pub mod detformula;
pub mod diff;
pub mod error;
pub mod geometry;
pub mod moduli;
pub mod specialfn;
pub mod spectral;

pub use error::{Error, Result};
