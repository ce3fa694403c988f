//! Crate-wide error type and the exit-code mapping used by the CLI.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Problems with the run configuration document itself.
    #[error("config error: {0}")]
    Config(String),

    /// Filesystem access failure on an input or output path.
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Malformed ASCII grid input; `line` is 1-based over the whole file.
    #[error("raster parse error: {msg} at line {line}")]
    RasterParse { line: usize, msg: String },

    /// Malformed feature-collection input.
    #[error("vector parse error: {0}")]
    VectorParse(String),

    /// An operation was called outside its domain (bad geometry, point off
    /// the DEM, mismatched layers, ...).
    #[error("{0}")]
    Domain(String),

    /// A condition the engine itself guarantees was violated.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code: 0 success, 2 config error, 3 layer/parse/data
    /// error, 4 internal invariant violation.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Io { .. }
            | Error::RasterParse { .. }
            | Error::VectorParse(_)
            | Error::Domain(_) => 3,
            Error::Invariant(_) => 4,
        }
    }
}
