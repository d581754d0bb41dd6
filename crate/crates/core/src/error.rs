use thiserror::Error;

/// Errors raised by the library. The CLI maps every variant to exit code 1.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed graph document: {0}")]
    Malformed(String),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("multi-edge between {0} and {1}")]
    MultiEdge(usize, usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("trivial vertex group at vertex {0}")]
    TrivialGroup(usize),
    #[error("non-associative table: ({0}*{1})*{2} != {0}*({1}*{2})")]
    NonAssociative(usize, usize, usize),
    #[error("invalid group table: {0}")]
    InvalidTable(String),
    #[error("graph has {0} vertices; at most {1} are supported here")]
    TooManyVertices(usize, usize),
    #[error("vertex {0} carries an infinite or abstract label; a finite group is required")]
    NonFiniteLabel(usize),
    #[error("vertex {0} carries an abstract label; a concrete table is required")]
    AbstractLabel(usize),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("subgraph must be a proper subset of the vertex set")]
    NotProperSubset,
    #[error("invalid syllable {vertex}:{elem}")]
    InvalidSyllable { vertex: usize, elem: usize },
    #[error("cannot parse word: {0}")]
    WordSyntax(String),
    #[error("words live in different graph products")]
    AmbientMismatch,
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("element cap of {cap} exceeded at radius {radius}")]
    CapExceeded { cap: usize, radius: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("element is not in the subgraph")]
    NotInSubgraph,
    #[error("pair is not adjacent in the Cayley graph")]
    NotAdjacent,
    #[error("subgraph has {0} vertices, above the exact-search limit {1}")]
    TooLargeForExact(usize, usize),
    #[error("subgraph is disconnected")]
    Disconnected,
    #[error("not a valid delta-cut: component of size {size} exceeds {limit}")]
    InvalidCut { size: usize, limit: String },
}

pub type Result<T> = std::result::Result<T, Error>;
