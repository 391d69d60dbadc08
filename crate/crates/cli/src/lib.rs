//! Command-line front end: a small description language, command dispatch
//! and JSON reports.

pub mod args;
pub mod commands;
pub mod dsl;
pub mod model;
pub mod report;

pub use args::Cli;
pub use commands::{execute, CliError, Output};

/// Exit code for usage, parse and semantic errors.
pub const USAGE_EXIT: u8 = 3;
