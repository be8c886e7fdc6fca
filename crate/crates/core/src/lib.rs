//! Exact computations with toric varieties, their equivariant cohomology and
//! hypergeometric series.

pub mod algebra;
pub mod cli;
pub mod equivariant;
pub mod error;
pub mod hypergeometric;
pub mod mirror;
pub mod toric;

pub use error::{Error, Result};
