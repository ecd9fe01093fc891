use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex label {0} out of range 1..={1}")]
    VertexOutOfRange(usize, usize),
    #[error("graph order {0} exceeds the supported maximum of {max}", max = crate::graph::MAX_ORDER)]
    OrderTooLarge(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("graph is not decomposable")]
    NotDecomposable,
    #[error("exhaustive enumeration is limited to p <= {limit}, got p = {0}", limit = crate::graph::ENUMERATION_LIMIT)]
    EnumerationTooLarge(usize),
    #[error("invalid junction tree: {0}")]
    InvalidTree(String),
    #[error("{0} is not a separator of the tree")]
    NotASeparator(String),
    #[error("vertex {0} already present in the tree")]
    VertexPresent(usize),
    #[error("vertex {0} not present in the tree")]
    VertexAbsent(usize),
    #[error("subtree selection is not connected")]
    DisconnectedSubtree,
    #[error("trees do not differ by exactly one vertex")]
    VertexSetMismatch,
    #[error("separator bookkeeping mismatch: {0}")]
    MuBookkeeping(String),
    #[error("invalid kernel parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("inconsistent retained path: {0}")]
    InvalidRetainedPath(String),
    #[error("matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("proposal density is zero for a realized transition; the proposal kernel does not dominate the target")]
    ZeroProposalDensity,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input file: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
