use thiserror::Error;

use crate::graph::Edge;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range (graph has {count} vertices)")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("edge {0} is not present in the graph")]
    MissingEdge(Edge),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("invalid branching vector: {0}")]
    InvalidVector(String),
    #[error("graph has {0} vertices, the bitset oracle supports at most 64")]
    TooLarge(usize),
    #[error("case detection needs a fully reduced graph with a conflict: {0}")]
    CasePrecondition(&'static str),
    #[error("solver certificate rejected: residual graph is not a 2-clubs graph")]
    CertificateRejected,
}

pub type Result<T> = std::result::Result<T, Error>;
