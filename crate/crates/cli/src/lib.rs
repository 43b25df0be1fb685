//! Command implementations behind the `femforge` binary.

pub mod args;
mod commands;
mod config;

use std::fmt;

pub use args::Cli;
pub use commands::run;
pub use config::ProblemConfig;

/// Why a command failed; decides the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Invalid input or configuration (exit 2).
    Usage(anyhow::Error),
    /// Failure while running (exit 1).
    Runtime(anyhow::Error),
    /// The solver stopped before reaching the tolerance (exit 3).
    NotConverged(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
            Failure::NotConverged(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(e) | Failure::Runtime(e) => write!(f, "{e:#}"),
            Failure::NotConverged(m) => f.write_str(m),
        }
    }
}

pub(crate) fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

pub(crate) fn runtime(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Runtime(e.into())
}
