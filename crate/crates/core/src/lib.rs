//! Exact space-group computations for compact flat manifolds.

pub mod bands;
pub mod boundary;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod groups;
pub mod linalg;

pub use error::{Error, Result};
