//! Executable pieces of effective equidistribution for horospherical translates:
//! exact Lie identities in the enveloping algebra, Burger-type integral kernels,
//! Weyl-chamber utilities and numerics on the modular surface.

pub mod burger;
pub mod enveloping;
pub mod error;
pub mod lie;
pub mod linalg;
pub mod modular;
pub mod rational;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
