//! Command-line front end: argument validation, dispatch and file formats.

pub mod config;
pub mod dispatch;
pub mod formats;

pub use config::{parse_config, RunConfig, Subcommand, UsageError, USAGE};
pub use dispatch::{dispatch, EXIT_FAILURE, EXIT_NOT_CERTIFIED, EXIT_OK};
