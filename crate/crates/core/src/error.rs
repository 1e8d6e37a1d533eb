use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("self-loop at {0}")]
    SelfLoop(VertexId),
    #[error("parallel edge {u}-{v}")]
    ParallelEdge { u: VertexId, v: VertexId },
    #[error("negative weight on {u}-{v}")]
    NegativeWeight { u: VertexId, v: VertexId },
    #[error("weight denominators overflow the common scale")]
    WeightOverflow,
    #[error("graph not connected")]
    Disconnected,
    #[error("not a spanning tree: {0}")]
    NotSpanningTree(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("decomposition is not nice: bags {0} and {1} differ on more than one vertex")]
    NotNice(usize, usize),
    #[error("graph is not completed: missing edge {0}-{1}")]
    NotCompleted(VertexId, VertexId),
    #[error("tree is not monotone: parent {parent} of {child} starts to its right")]
    NotMonotone { child: VertexId, parent: VertexId },
    #[error("vertex {0} has no earlier neighbour to attach to")]
    NoEarlierNeighbor(VertexId),
    #[error("invalid charging scheme: {0}")]
    InvalidScheme(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("trace does not match spanner: {0}")]
    TraceMismatch(String),
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
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

impl Error {
    /// Stable snake_case name of the variant, for machine-readable output.
    /// Stage wrappers report the kind of the error they wrap.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownVertex(_) => "unknown_vertex",
            Error::UnknownEdge(_) => "unknown_edge",
            Error::SelfLoop(_) => "self_loop",
            Error::ParallelEdge { .. } => "parallel_edge",
            Error::NegativeWeight { .. } => "negative_weight",
            Error::WeightOverflow => "weight_overflow",
            Error::Disconnected => "disconnected",
            Error::NotSpanningTree(_) => "not_spanning_tree",
            Error::InvalidDecomposition(_) => "invalid_decomposition",
            Error::NotNice(..) => "not_nice",
            Error::NotCompleted(..) => "not_completed",
            Error::NotMonotone { .. } => "not_monotone",
            Error::NoEarlierNeighbor(_) => "no_earlier_neighbor",
            Error::InvalidScheme(_) => "invalid_scheme",
            Error::Precondition(_) => "precondition",
            Error::TraceMismatch(_) => "trace_mismatch",
            Error::NonPositiveEpsilon => "non_positive_epsilon",
            Error::InvalidSpec(_) => "invalid_spec",
            Error::Format { .. } => "format",
            Error::Stage { source, .. } => source.kind(),
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }

    /// Pipeline stage the error was raised in, if any.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            Error::Stage { stage, .. } => Some(stage),
            _ => None,
        }
    }

    /// Line number for errors raised while parsing a text file.
    pub fn line(&self) -> Option<usize> {
        match self {
            Error::Format { line, .. } => Some(*line),
            Error::Stage { source, .. } => source.line(),
            _ => None,
        }
    }

    pub(crate) fn at(stage: &'static str) -> impl FnOnce(Error) -> Error {
        move |source| Error::Stage { stage, source: Box::new(source) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
