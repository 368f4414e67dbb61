use thiserror::Error;

/// Errors raised by graph construction and the algebraic operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed graph: {0}")]
    Malformed(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph is not one-particle irreducible")]
    NotOnePi,

    #[error("scale {scale} outside [0, {rho}]")]
    ScaleOutOfRange { scale: i32, rho: i32 },

    #[error("subgraph has no internal edges")]
    EmptySubgraph,

    #[error("invalid subgraph: {0}")]
    InvalidSubgraph(String),

    #[error("component with {0} external legs cannot be shrunk (expected 2 or 4)")]
    BadArity(usize),

    #[error("gluing arity mismatch: insertion point has {point} half-edges, insert has {insert} legs")]
    ArityMismatch { point: usize, insert: usize },

    #[error("gluing scale mismatch at leg {leg}: host carries {host}, insert carries {insert}")]
    ScaleMismatch { leg: usize, host: i32, insert: i32 },

    #[error("characters live in different target algebras ({0} vs {1})")]
    TargetMismatch(String, String),

    #[error("unsupported sector: {0}")]
    UnsupportedSector(String),

    #[error("catalog too shallow: need {needed} vertices, have {available}")]
    CatalogDepth { needed: usize, available: usize },

    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(u32, u32),

    #[error("too many internal edges for subgraph enumeration ({0} > 64)")]
    TooManyEdges(usize),

    #[error("enumeration bound exceeded: {0}")]
    BoundExceeded(String),

    #[error("class not in enumerated universe")]
    NotInUniverse,

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
