pub mod arith;
pub mod census;
pub mod error;
pub mod disc_lab;
pub mod ff;
pub mod fourier;
pub mod galois;
pub mod zfactor;
pub mod poly;
pub mod verify;
pub mod wreath;
mod serde_util;

pub use error::{RecipError, Result};
pub use poly::{IntPoly, SymPair};
