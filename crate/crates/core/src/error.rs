//! Crate-wide error type.
//!
//! Variants are grouped by how a caller should react: bad user-supplied
//! values (gains, schedules, config files), broken runtime contracts
//! (hybrid flow/jump preconditions, degenerate matrices mid-run), and
//! input/output trouble (files, sensor logs). [`Error::exit_code`] encodes
//! that grouping for the CLI.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Rotation axis is not unit length.
    #[error("axis has norm {norm}, expected a unit vector; normalize the axis before calling")]
    NonUnitAxis { norm: f64 },

    /// Matrix cannot be projected onto SO(3), its determinant is not positive.
    #[error("matrix with determinant {determinant} cannot be projected onto SO(3)")]
    DegenerateMatrix { determinant: f64 },

    /// A matrix claimed to be a rotation fails the orthonormality check.
    #[error("not a rotation matrix: orthonormality residual {residual}, determinant {determinant}")]
    InvalidRotation { residual: f64, determinant: f64 },

    /// Vector set does not span enough directions for attitude observability.
    #[error("degenerate vector set: {0}")]
    CollinearVectors(String),

    /// Weight matrix spectrum outside what the gain designer supports.
    #[error("unsupported weight-matrix spectrum: {0}")]
    UnsupportedSpectrum(String),

    /// A scalar or structural parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Problem in a scenario config file.
    #[error("config line {line}: {message}")]
    ConfigFile { line: usize, message: String },

    /// A flow map was evaluated outside its flow set.
    #[error("flow contract violated: {0}")]
    FlowContract(String),

    /// A jump map was evaluated outside its jump set.
    #[error("jump contract violated: {0}")]
    JumpContract(String),

    /// Depth channel of a tag corner is unusable.
    #[error("invalid depth {depth}; depths must be finite and positive")]
    InvalidDepth { depth: f64 },

    /// Tag corner geometry collapsed (coincident or collinear corners).
    #[error("degenerate tag geometry: {0}")]
    DegenerateTag(String),

    /// Sensor log violates the line format or timestamp ordering.
    #[error("log line {line}: {message}")]
    LogFormat { line: usize, message: String },

    /// File system failure, tagged with the path involved.
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the CLI: 1 config, 2 contract, 3 I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::NonUnitAxis { .. }
            | Error::InvalidRotation { .. }
            | Error::CollinearVectors(_)
            | Error::UnsupportedSpectrum(_)
            | Error::InvalidParameter(_)
            | Error::ConfigFile { .. } => 1,
            Error::DegenerateMatrix { .. }
            | Error::FlowContract(_)
            | Error::JumpContract(_) => 2,
            Error::InvalidDepth { .. }
            | Error::DegenerateTag(_)
            | Error::LogFormat { .. }
            | Error::Io { .. } => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
