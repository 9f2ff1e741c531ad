use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("vertex {vertex} out of range for graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("negative or non-finite length {length} on edge {{{u}, {v}}}")]
    NegativeLength { u: usize, v: usize, length: f64 },
    #[error("negative or non-finite weight {weight} on vertex {vertex}")]
    NegativeWeight { vertex: usize, weight: f64 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("invalid root {root} for graph on {n} vertices")]
    InvalidRoot { root: usize, n: usize },
    #[error("instance too large: {size} exceeds limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("total vertex weight is zero")]
    ZeroTotalWeight,
    #[error("balance parameter {0} outside (0, 1]")]
    InvalidAlpha(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("decomposition does not cover the vertex set")]
    IncompleteDecomposition,
    #[error("planarization remainder is not planar")]
    RemainderNotPlanar,
    /// A sampled host or report broke one of its stated invariants.
    #[error("contract violation [{invariant}]: {detail}")]
    Contract { invariant: &'static str, detail: String },
}

impl Error {
    pub(crate) fn contract(invariant: &'static str, detail: impl Into<String>) -> Self {
        Error::Contract {
            invariant,
            detail: detail.into(),
        }
    }
}
