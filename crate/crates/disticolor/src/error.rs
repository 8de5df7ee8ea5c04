//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex count {0} outside supported range 0..=62")]
    BadOrder(usize),
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {0:#04x} outside printable graph6 range 63..=126")]
    ByteOutOfRange(u8),
    #[error("multi-byte vertex counts are not supported (n > 62)")]
    UnsupportedOrder,
    #[error("graph6 string has wrong length: expected {expected} payload bytes, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("trailing padding bits are not zero")]
    TrailingBits,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("invalid parameters for {family}: {reason}")]
    InvalidParams { family: String, reason: String },
    #[error("random regular generation failed after {attempts} attempts (n={n}, d={d}, seed={seed})")]
    GenerationFailed { n: usize, d: usize, seed: u64, attempts: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("automorphism group larger than cap {cap}")]
    GroupTooLarge { cap: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColouringError {
    #[error("colouring file is empty")]
    EmptyFile,
    #[error("first line must be `graph6 <string>`")]
    MissingHeader,
    #[error("bad edge line {0:?}")]
    BadEdgeLine(String),
    #[error("edge ({0}, {1}) is not an edge of the graph")]
    UnknownEdge(usize, usize),
    #[error("edge ({0}, {1}) coloured twice")]
    DuplicateEdge(usize, usize),
    #[error("incomplete colouring: {missing} edge(s) missing")]
    Incomplete { missing: usize },
    #[error("colouring is for a different graph")]
    GraphMismatch,
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
}
