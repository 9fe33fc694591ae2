//! Front end for `conestab`: document ingestion and the command verbs.
//!
//! Exit codes are a stable contract: 0 on success, 2 on any validation or
//! usage failure, 3 when an enumeration budget or solver tolerance is hit.

pub mod commands;
pub mod document;

use std::fmt;

use conestab_core::Error;

pub use document::{parse_document, parse_levels, Diagnostic, Document, RawDocument};

pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Environment variable overriding the enumeration cap.
pub const BUDGET_ENV: &str = "CONESTAB_BUDGET";

#[derive(Debug)]
pub enum CliError {
    Io(String),
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Field(Diagnostic),
    UnknownFiltration(String),
    Usage(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::BudgetExceeded { .. } | Error::ToleranceNotReached { .. }) => {
                EXIT_BUDGET
            }
            _ => EXIT_VALIDATION,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(m) => write!(f, "cannot read input: {m}"),
            CliError::Parse {
                line,
                column,
                message,
            } => {
                write!(f, "parse error at line {line}, column {column}: {message}")
            }
            CliError::Field(d) => write!(f, "invalid document at {d}"),
            CliError::UnknownFiltration(n) => write!(f, "unknown filtration {n:?}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}
