pub mod error;
pub mod signature;
pub mod surface_map;
pub mod arrangements;
pub mod complexes;
pub mod contraction;
pub mod chern;
pub mod cli;

pub use error::{Error, Result};
pub use signature::SurfaceSignature;
