use thiserror::Error;

/// Violations of the simple-graph invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge references unknown vertex {0}")]
    UnknownVertex(usize),
}

/// Failure to read the graph transaction format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed line: {0:?}")]
    Malformed(String),
    #[error("record before any `t` header")]
    NoGraph,
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(usize),
    #[error("vertex id {found} out of sequence, expected {expected}")]
    VertexOutOfSequence { expected: usize, found: usize },
    #[error("edge references unknown vertex {0}")]
    UnknownVertex(usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("duplicate graph id {0:?}")]
    DuplicateGraph(String),
}

/// Refusals from the brute-force oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph with {vertices} vertices exceeds oracle limit of {limit}")]
    TooManyVertices { vertices: usize, limit: usize },
    #[error("more than {limit} mappings would be enumerated")]
    TooManyMappings { limit: u64 },
}

/// An edit operation that cannot be applied to the current graph.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("operation {index} ({op}) is not applicable: {reason}")]
pub struct EditPathError {
    pub index: usize,
    pub op: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("density {0} is outside (0, 1]")]
    Density(f64),
    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),
    #[error("vertex range {min}..={max} is empty")]
    VertexRange { min: usize, max: usize },
}
