use crate::cones::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("direction from {from} to {to} lies on a cone boundary ray")]
    DegenerateDirection { from: String, to: String },

    #[error("vertex {target} is not in a positive cone of vertex {apex}")]
    NotInPositiveCone { apex: usize, target: usize },

    #[error("malformed instance: {0}")]
    MalformedInstance(String),

    #[error("instance violates general position: {0}")]
    InvalidInstance(ValidationReport),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("edge ({0}, {1}) on the canonical path of {2} matches no charging rule")]
    UnchargeableEdge(usize, usize, usize),

    #[error("inconsistent construction state: {0}")]
    InconsistentState(String),

    #[error("transformation conflict: {0}")]
    ConflictDetected(String),

    #[error("edge ({0}, {1}) is not in the base graph")]
    NotSubgraph(usize, usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("instance generation exhausted: {0}")]
    GenerationExhausted(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
