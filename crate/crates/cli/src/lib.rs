//! Command-line front end: compute, verify, study and export.

pub mod args;
pub mod commands;
pub mod error;
pub mod export;
pub mod input;
pub mod record;
pub mod study;

pub use commands::{run, Outcome, EXIT_FAILED, EXIT_INPUT, EXIT_OK};
pub use error::{CliError, Result};
