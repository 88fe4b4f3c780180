//! Crate-wide error type and result alias.

use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong in the code, the file formats, or the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division or inversion by zero")]
    DivisionByZero,

    #[error("singular matrix: rank {rank} of {dim}")]
    Singular { rank: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid field: {0}")]
    Field(String),

    #[error("invalid parameters: {0}")]
    Params(String),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("malformed file: {0}")]
    Format(String),

    #[error("checksum mismatch: {0}")]
    Checksum(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code for the CLI: 3 parameter, 4 integrity, 5 I/O.
    ///
    /// Usage errors (exit 2) are produced by the argument parser before any
    /// of these variants can occur.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::DivisionByZero
            | Error::Singular { .. }
            | Error::Dimension(_)
            | Error::Field(_)
            | Error::Params(_)
            | Error::Input(_) => 3,
            Error::Verification(_) | Error::Format(_) | Error::Checksum(_) => 4,
            Error::Io(_) => 5,
        }
    }
}
