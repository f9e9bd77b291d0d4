//! Errors of the command-line front end and their exit codes.

use thiserror::Error;

/// Input and runtime failures of the CLI.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration is not valid JSON or has the wrong layout.
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    /// The `schema` key is missing or names an unsupported version.
    #[error("unsupported configuration schema {0}; expected 1")]
    Schema(String),
    /// A key required by the command is absent.
    #[error("missing configuration field `{0}`")]
    MissingField(String),
    /// A key is present but its value is unusable.
    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidField {
        /// Dotted key of the offending field.
        field: String,
        /// What is wrong with it.
        reason: String,
    },
    /// A differentiated axis has fewer than three points.
    #[error("grid axis {axis} has {points} points; differentiated axes need at least 3")]
    GridTooSmall {
        /// Axis index.
        axis: usize,
        /// Points along it.
        points: usize,
    },
    /// A library call rejected the input.
    #[error("{0}")]
    Core(#[from] gaugeframe::Error),
    /// Reading or writing a file failed.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: every error of this type is an input error.
    pub fn exit_code(&self) -> i32 {
        2
    }
}
