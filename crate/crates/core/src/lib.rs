//! Demazure roots of affine SL2-varieties of complexity one, with exact
//! symbolic certificates.

pub mod error;
pub mod divisors;
pub mod engine;
pub mod lattice;
pub mod roots;
pub mod sample;
pub mod symbolic;
pub mod type1;
pub mod type2;

pub use error::{Error, Result};
