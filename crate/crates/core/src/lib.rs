pub mod error;
pub mod eval;
pub mod features;
pub mod cli;
pub mod ingest;
pub mod learn;
pub mod text;
pub mod topics;

pub use error::{Error, Result};
