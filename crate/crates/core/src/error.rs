use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("cochain of degree {degree} has {found} values, complex level has {expected} cliques")]
    LengthMismatch {
        degree: usize,
        expected: usize,
        found: usize,
    },

    #[error("level k={k} out of range (max admissible {max})")]
    LevelOutOfRange { k: usize, max: usize },

    #[error("clique level of order {order} was never enumerated; raise max_order")]
    LevelNotEnumerated { order: usize },

    #[error("missing weights for cliques of order {order}")]
    MissingWeights { order: usize },

    #[error("invalid weight {value} (weights must be finite and strictly positive)")]
    InvalidWeight { value: f64 },

    #[error("least-squares solver did not converge after {iterations} iterations (best relative residual {residual:.3e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph has {n} vertices; exhaustive enumeration supports at most {max}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
