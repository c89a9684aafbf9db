use crate::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {vertex_count} vertices")]
    VertexOutOfRange { vertex: Vertex, vertex_count: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {{{u}, {v}}} has non-positive cost {cost}")]
    NonPositiveCost { u: Vertex, v: Vertex, cost: f64 },
    #[error("cost list has {costs} entries but edge list has {edges}")]
    CostCountMismatch { edges: usize, costs: usize },
    #[error("operation requires a unit-cost graph")]
    WeightedGraph,
    #[error("subdivision factor must be at least 1, got {0}")]
    BadSubdivision(usize),
    #[error("labelled set is empty")]
    EmptyBoundary,
    #[error("vertex {0} cannot be reached from the labelled set / goal")]
    Unreachable(Vertex),
    #[error("operation is undefined at the goal vertex {0}")]
    AtGoal(Vertex),
    #[error("vertex {0} has no neighbours")]
    Isolated(Vertex),
    #[error("vertex {vertex} has degree {degree}, need at least {needed}")]
    DegreeTooSmall { vertex: Vertex, degree: usize, needed: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("field has {field} values but graph has {graph} vertices")]
    SizeMismatch { field: usize, graph: usize },
    #[error("method {0} has no local residual")]
    NoResidual(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("layout's open region is not 4-connected")]
    DisconnectedLayout,
    #[error("infeasible configuration: {0}")]
    Infeasible(String),
    #[error("pairing mismatch: {0}")]
    Pairing(String),
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
