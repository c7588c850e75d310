use std::path::PathBuf;

use thiserror::Error;

/// Input that violates a documented contract: bad JSON, out-of-range
/// parameters, malformed regions.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{path}: {message}")]
pub struct ValidationError {
    /// JSON path or parameter name of the offending value.
    pub path: String,
    pub message: String,
}

impl ValidationError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// Failures inside the planar kernel. Coordinates are in millimetres.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("self-intersecting contour near ({x:.9}, {y:.9})")]
    SelfIntersection { x: f64, y: f64 },
    #[error("snap rounding did not converge near ({x:.9}, {y:.9})")]
    Unresolved { x: f64, y: f64 },
    #[error("boundary chain left open at ({x:.9}, {y:.9})")]
    OpenChain { x: f64, y: f64 },
    #[error("coordinate {value} is outside the representable range")]
    OutOfRange { value: f64 },
    #[error("degenerate input: {0}")]
    Degenerate(String),
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(#[from] ValidationError),
    #[error("geometry error: {0}")]
    Geometry(#[from] GeometryError),
    #[error("geometry error at segment {segment} (end CL {cl:?}): {source}{}", snapshot_note(.snapshot))]
    Segment {
        segment: usize,
        cl: [f64; 3],
        source: GeometryError,
        snapshot: Option<PathBuf>,
    },
    #[error("i/o error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

fn snapshot_note(snapshot: &Option<PathBuf>) -> String {
    match snapshot {
        Some(p) => format!("; IPW snapshot written to {}", p.display()),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the CLI: 1 for bad input, 2 for kernel failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Io { .. } => 1,
            Error::Geometry(_) | Error::Segment { .. } => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
