use crate::graph::VertexId;

/// Errors raised by generators, the simulator, the algorithms and the verifier.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("exact oracle is limited to n <= {limit}, got n = {n}")]
    SizeLimit { n: usize, limit: usize },

    /// The round cap was hit; `undecided` lists the vertices still running.
    #[error("round cap {cap} exceeded with {} undecided vertices", undecided.len())]
    Nontermination { cap: usize, undecided: Vec<VertexId> },

    /// A node program broke the synchronous model contract.
    #[error("model violation by vertex {vertex} in round {round}: {reason}")]
    ModelViolation {
        vertex: VertexId,
        round: usize,
        reason: String,
    },

    /// A message-driven program went a full round without messages or decisions.
    #[error("no progress in round {round} with {} undecided vertices", undecided.len())]
    Quiescent { round: usize, undecided: Vec<VertexId> },

    /// Peeling stalled: the residual subgraph has more edges than arboricity `a` allows.
    #[error("arboricity bound a = {a} is too small: peeling stalled on {} residual vertices", residual.len())]
    ArboricityUnderestimate { a: usize, residual: Vec<VertexId> },

    #[error("orientation has a directed cycle through {cycle:?}")]
    Cycle { cycle: Vec<VertexId> },

    #[error("vertex {vertex} has no feasible recoloring value")]
    Infeasible { vertex: VertexId },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("incomplete certificate: {0}")]
    IncompleteCertificate(String),

    #[error("recoloring did not converge: {0}")]
    Convergence(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
