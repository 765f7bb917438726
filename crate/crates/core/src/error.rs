use std::fmt;

use thiserror::Error;

/// A violation of the general-position assumptions on a straight-line drawing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degeneracy {
    CoincidentVertices { first: usize, second: usize },
    VertexOnEdge { vertex: usize, edge: usize },
    CollinearOverlap { first: usize, second: usize },
    ConcurrentCrossing { edges: [usize; 3] },
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::CoincidentVertices { first, second } => {
                write!(f, "vertices {first} and {second} share a position")
            }
            Degeneracy::VertexOnEdge { vertex, edge } => {
                write!(f, "vertex {vertex} lies in the interior of edge {edge}")
            }
            Degeneracy::CollinearOverlap { first, second } => {
                write!(f, "edges {first} and {second} overlap collinearly")
            }
            Degeneracy::ConcurrentCrossing { edges: [a, b, c] } => {
                write!(f, "edges {a}, {b} and {c} pass through one crossing point")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("invalid drawing: {0}")]
    InvalidDrawing(String),
    #[error("degenerate drawing: {0}")]
    Degenerate(Degeneracy),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("search space of {size} states exceeds the cap of {cap}")]
    SearchSpaceTooLarge { size: f64, cap: f64 },
    #[error("retries exhausted: {0}")]
    RetriesExhausted(String),
    #[error("malformed JSON: {0}")]
    Json(serde_json::Error),
}

// Not `#[from]`: that would also expose the error as a source and print
// the message twice in chained reports.
impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid_arg(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
