use thiserror::Error;

/// Errors produced by graph construction, certification and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("edge ({0}, {1}) is not present")]
    MissingEdge(usize, usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("{lambda} is not a radial eigenvalue of the depth-{depth} tree")]
    NotRadial { lambda: f64, depth: usize },

    #[error("packing found {found} admissible roots, {wanted} requested")]
    InsufficientPacking { wanted: usize, found: usize },

    #[error("eigensolver stopped after {iterations} iterations without converging (best residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
