//! File formats, reports and the named verification suites behind the
//! `nijenhuis` binary.

pub mod input;
pub mod report;
pub mod suites;

pub use report::{Check, RunReport};
pub use suites::{run_suite, SuiteConfig, SUITES};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("unknown suite `{0}`; known suites: {known}", known = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("estimated {estimate} terms exceeds the ceiling of {ceiling}")]
    ResourceCeiling { estimate: u128, ceiling: u128 },
    #[error("{0}")]
    Kernel(#[from] nijenhuis_core::Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
}

/// Process exit statuses.
pub mod exit {
    pub const PASS: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const VALIDATION: i32 = 3;
    pub const UNKNOWN_SUITE: i32 = 4;
    pub const RESOURCE_CEILING: i32 = 5;
    pub const INTERNAL: i32 = 6;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => exit::PARSE,
            CliError::Validation(_) => exit::VALIDATION,
            CliError::UnknownSuite(_) => exit::UNKNOWN_SUITE,
            CliError::ResourceCeiling { .. } => exit::RESOURCE_CEILING,
            CliError::Kernel(nijenhuis_core::Error::Structure(_) | nijenhuis_core::Error::Domain(_)) => exit::VALIDATION,
            CliError::Kernel(_) | CliError::Io(_) => exit::INTERNAL,
        }
    }
}
