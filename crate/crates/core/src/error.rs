use std::io;

use thiserror::Error;

/// Errors surfaced by graph loading, index construction, and index I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("vertex id {id} out of range (graph has {vertex_count} vertices)")]
    VertexOutOfRange { id: usize, vertex_count: usize },

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("index format: {0}")]
    Format(String),

    #[error("build stopped after {hops_done} of {hop_count} hops with {entries} entries: {reason}")]
    BudgetExceeded {
        hops_done: usize,
        hop_count: usize,
        entries: usize,
        reason: &'static str,
    },

    #[error("operation requires a {expected} index, got {actual}")]
    WrongVariant {
        expected: &'static str,
        actual: &'static str,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
