//! Qudit stabilizer formalism and magic-resource toolkit over Z_q.

pub mod covering;
pub mod dense;
pub mod error;
pub mod magic;
pub mod pauli;
pub mod stabilizer;
pub mod toric;
pub mod witness;
pub mod ring;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
