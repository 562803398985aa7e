//! Error type for the command-line front end.
//!
//! Library failures bubble up unchanged; everything the front end itself can
//! get wrong (syntax, unknown bindings, bad flags, I/O) is wrapped with enough
//! location information to point at the offending input.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// A syntax or binding error in workspace text or an inline literal,
    /// located by source label, line, and column.
    #[error("{label}:{line}:{column}: {message}")]
    Parse { label: String, line: usize, column: usize, message: String },

    /// A usage problem outside the DSL: missing flags, unknown names,
    /// malformed flag values.
    #[error("{0}")]
    Usage(String),

    /// An algebra failure from the underlying library.
    #[error(transparent)]
    Core(#[from] modspectra::Error),

    /// Reading an input file or stream failed.
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn parse(label: &str, line: usize, column: usize, message: impl Into<String>) -> CliError {
        CliError::Parse { label: label.to_string(), line, column, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> CliError {
        CliError::Usage(message.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;
