pub mod error;
pub mod numkernel;
pub mod rng;

pub use error::{Error, Result};
pub mod cli;
pub mod ftvn;
pub mod hyperbolic;
pub mod lie;
pub mod principles;
pub mod registry;
pub mod systems;
