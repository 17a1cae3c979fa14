use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{file}:{line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("vertex relabel cost {relabel} exceeds twice the vertex indel cost {indel}; the label ground cost is not a tree metric")]
    RelabelTooExpensive { relabel: f64, indel: f64 },

    #[error("vertex indel cost {indel} is below the ultrametric height {height}; the label ground cost is not a tree metric")]
    DeletionTooCheap { indel: f64, height: f64 },

    #[error("invalid cost model: {0}")]
    InvalidCost(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("no tree node anchors {0}")]
    UnanchoredVertex(String),

    #[error("embeddings were produced by different metric trees")]
    TreeMismatch,

    #[error("assignment instance of size {size} exceeds the dense solver cap {cap}")]
    InstanceTooLarge { size: usize, cap: usize },

    #[error("graph pair with {size} combined vertices exceeds the exact solver cap {cap}")]
    SizeCapExceeded { size: usize, cap: usize },

    #[error("corrupt index file: {0}")]
    CorruptIndex(String),

    #[error("index format version {found} is not supported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("{0}")]
    Usage(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(file: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            line,
            message: message.into(),
        }
    }

    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            Error::Io { .. } => 2,
            Error::RelabelTooExpensive { .. }
            | Error::DeletionTooCheap { .. }
            | Error::InvalidCost(_) => 4,
            _ => 3,
        }
    }
}
