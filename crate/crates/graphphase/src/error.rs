//! Crate-wide error type.

use thiserror::Error;

use crate::perturb::TraceEntry;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("duplicate edge {src}->{dst} at line {line}")]
    DuplicateEdge { line: usize, src: usize, dst: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("node index {node} out of range for {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },

    #[error(
        "adjacency is not diagonalizable under the current tolerances ({0}); \
         perturb the graph first"
    )]
    Defective(String),

    #[error(
        "eigensolver failed to converge (n={n}, fro_norm={fro:.6e}, nonzeros={nnz}, info={info})"
    )]
    EigFailed { n: usize, fro: f64, nnz: usize, info: i32 },

    #[error("numerical error: {0}")]
    Numerical(String),

    #[error("perturbation stuck after {} added edges: {reason}", trace.len())]
    PerturbationStuck { reason: String, trace: Vec<TraceEntry> },

    #[error("perturbation exceeded {max_iterations} iterations")]
    MaxIterations {
        max_iterations: usize,
        trace: Vec<TraceEntry>,
    },

    #[error("graph admits no cycle cover")]
    NoCycleCover,

    #[error("component {component} violates its support at node {node}")]
    SupportViolation { component: usize, node: usize },

    #[error("path too short: need at least 2 nodes")]
    PathTooShort,

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
