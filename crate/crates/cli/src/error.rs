use std::io;

/// Exit codes are part of the interface and must not change.
pub mod exit {
    pub const OK: i32 = 0;
    pub const IO: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const SOLVER: i32 = 3;
    pub const STRICT: i32 = 4;
    pub const DIAGNOSTIC: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("{0} bound violation(s) under --strict")]
    Strict(usize),
    #[error("diagnostic failed: {0}")]
    Diagnostic(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Solver(_) => exit::SOLVER,
            CliError::Strict(_) => exit::STRICT,
            CliError::Diagnostic(_) => exit::DIAGNOSTIC,
            CliError::Io { .. } => exit::IO,
        }
    }

    pub fn config(msg: impl std::fmt::Display) -> Self {
        CliError::Config(msg.to_string())
    }

    pub fn solver(msg: impl std::fmt::Display) -> Self {
        CliError::Solver(msg.to_string())
    }
}

/// Core input errors are configuration problems; everything else is a solver failure.
impl From<inexact_pg_core::Error> for CliError {
    fn from(e: inexact_pg_core::Error) -> Self {
        match e {
            inexact_pg_core::Error::Input(_) | inexact_pg_core::Error::Dimension { .. } => CliError::config(e),
            inexact_pg_core::Error::Failure(_) => CliError::solver(e),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
