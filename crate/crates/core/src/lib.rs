pub mod base;
pub mod characters;
pub mod cli;
pub mod delta;
pub mod error;
pub mod graded;
pub mod jet;
pub mod poly;
pub mod ring;
pub mod witt;

pub use error::{Error, Result};
