//! Library side of the `ssrent` command-line tool: file formats, report rows,
//! and the subcommand implementations.

pub mod commands;
pub mod error;
pub mod files;
pub mod report;

pub use error::{CliError, Result};
