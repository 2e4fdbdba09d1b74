//! Library half of the `inexact-pg` binary: configuration, artifact writing and
//! the subcommand pipelines.

pub mod artifacts;
pub mod cli;
pub mod commands;
pub mod config;
pub mod error;

pub use cli::Cli;
pub use commands::{execute, Outcome};
pub use config::RunConfig;
pub use error::{exit, CliError, CliResult};
