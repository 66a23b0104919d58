use thiserror::Error;

/// Errors produced by graph mutation, counting, and stream I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {0} is not allowed")]
    SelfLoop(u64),

    #[error("self-loop event at position {index}: ({u}, {v})")]
    SelfLoopEvent { index: usize, u: u64, v: u64 },

    #[error("unknown vertex id {0}")]
    UnknownVertex(u64),

    #[error("accumulator overflow while counting graphlets; counts would exceed i64")]
    Overflow,

    #[error("graph has {n} vertices, above the brute-force guard of {guard}; pass an explicit guard to override")]
    BruteGuardExceeded { n: usize, guard: usize },

    #[error("batch size must be at least 1")]
    EmptyBatchSize,

    #[error("add probability must satisfy 0 < p <= 1, got {0}")]
    InvalidProbability(f64),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("insert-only mode saw a delete event for edge ({u}, {v})")]
    DeleteInInsertOnly { u: u64, v: u64 },

    #[error("locality depth must be 2 or 3, got {0}")]
    InvalidDepth(u32),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
