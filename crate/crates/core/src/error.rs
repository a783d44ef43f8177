use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("graph is not planar")]
    NotPlanar,
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("inconsistent rotation: {0}")]
    InconsistentRotation(String),
    #[error("not a maximally planar graph: {0}")]
    NotTriangulation(String),
    #[error("invalid order: {0}")]
    InvalidOrder(String),
    #[error("no ear on the outer path: {0}")]
    NoEar(String),
    #[error("degenerate contact: {0}")]
    DegenerateContact(String),
    #[error("degenerate representation: {0}")]
    DegenerateRep(String),
    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),
    #[error("singular segment system (rank {rank} < {unknowns})")]
    SingularSystem { rank: usize, unknowns: usize },
    #[error("not an SL-representation: {0}")]
    NotSL(String),
    #[error("instance too large for the oracle: n = {n} > {max}")]
    TooLarge { n: usize, max: usize },
    #[error("invalid realizer: {0}")]
    InvalidRealizer(String),
    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),
}
