//! Files, evaluation and the command line around `fds-core`.

pub mod cli;
mod error;
pub mod eval;
pub mod io;

pub use error::{Error, Result};
pub use fds_core;
