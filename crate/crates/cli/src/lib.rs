//! Command-line front end: compose, decompose, sample, verify and fit over
//! JSON documents. See [`files`] for the formats and [`commands`] for the
//! behaviours; exit codes are a stable contract:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | I/O failure |
//! | 2 | malformed input or flags |
//! | 3 | verification failure (unitarity gate) |
//! | 4 | numeric-input failure (non-finite entries) |

pub mod commands;
pub mod files;

/// Failure classes, each tied to one exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or unwritable files. Exit 1.
    Io(String),
    /// Bad documents or flag values; the message names the offending field.
    /// Exit 2.
    Malformed(String),
    /// Input failed the unitarity gate. Exit 3.
    Verification(String),
    /// Entries that parse but are not finite numbers. Exit 4.
    NumericInput(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Malformed(_) => 2,
            CliError::Verification(_) => 3,
            CliError::NumericInput(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(msg) => write!(f, "error: {msg}"),
            CliError::Malformed(msg) => write!(f, "error: malformed input: {msg}"),
            CliError::Verification(msg) => write!(f, "error: {msg}"),
            CliError::NumericInput(msg) => write!(f, "error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}
