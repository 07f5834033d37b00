//! Positive solutions of parametrized generalized polynomial systems
//! `A (c o x^B) = 0` with real exponents.

pub mod cli;
pub mod error;
pub mod fixtures;
pub mod framework;
pub mod geometry;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod signchar;
pub mod trinomials;

pub use error::{Error, Result};
