use thiserror::Error;

/// Errors produced by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid part sizes: {0}")]
    InvalidSizes(String),

    #[error("vertices {x} and {y} both lie in part {part}")]
    PartViolation { x: usize, y: usize, part: usize },

    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("removing the requested vertices empties part {0}")]
    DegenerateParts(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("infeasible construction: {0}")]
    InfeasibleConstruction(String),

    #[error("host has {vertices} vertices, above the solver cap of {cap}")]
    CapExceeded { vertices: usize, cap: usize },

    #[error("corrupt resume file at line {line}: {message}")]
    CorruptResume { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
