pub mod bounds;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod matgen;
pub mod sign;

pub use error::{Error, Result};
