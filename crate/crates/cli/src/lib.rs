//! Batch front end: fixture registry, commands and run reports.

pub mod commands;
pub mod registry;
pub mod report;

use thiserror::Error;

pub use commands::{run, Cli};
pub use registry::Registry;
pub use report::RunReport;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: i32 = 0;
    pub const MISMATCH: i32 = 1;
    pub const INVALID: i32 = 2;
    pub const UNTRUSTED: i32 = 3;
    pub const EXHAUSTED: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("validation failed: {0}")]
    Invalid(String),
    #[error("untrusted window: {0}")]
    Untrusted(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Invalid(_) => exit::INVALID,
            CliError::Untrusted(_) => exit::UNTRUSTED,
            CliError::Exhausted(_) => exit::EXHAUSTED,
        }
    }
}

impl From<hfl_core::invariants::InvariantError> for CliError {
    fn from(e: hfl_core::invariants::InvariantError) -> Self {
        use hfl_core::invariants::InvariantError as E;
        match e {
            E::Homology(h) => h.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<hfl_core::HomologyError> for CliError {
    fn from(e: hfl_core::HomologyError) -> Self {
        use hfl_core::HomologyError as H;
        match e {
            H::EmptyTrustedRegion(_) | H::Untrusted(_) => CliError::Untrusted(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<hfl_core::cobordism::CobordismError> for CliError {
    fn from(e: hfl_core::cobordism::CobordismError) -> Self {
        match e {
            hfl_core::cobordism::CobordismError::Invariant(i) => i.into(),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<hfl_surfaces::SearchError> for CliError {
    fn from(e: hfl_surfaces::SearchError) -> Self {
        match e {
            hfl_surfaces::SearchError::Exhausted { .. } => CliError::Exhausted(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

impl From<hfl_surfaces::MoveError> for CliError {
    fn from(e: hfl_surfaces::MoveError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<hfl_surfaces::CellError> for CliError {
    fn from(e: hfl_surfaces::CellError) -> Self {
        CliError::Invalid(e.to_string())
    }
}
