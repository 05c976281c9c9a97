use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GkmError {
    #[error("zero linear form cannot be used as a restriction hyperplane")]
    ZeroForm,

    #[error("malformed graph: {0}")]
    MalformedGraph(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("direction is not generic: weight of edge {edge} vanishes on it")]
    NonGenericDirection { edge: usize },

    #[error("no generic direction found after {attempts} attempts (internal bug)")]
    Unreachable { attempts: usize },

    #[error("graph failed validation with {0} violation(s)")]
    InvalidGraph(usize),

    #[error("invalid fiber data: {0}")]
    InvalidFiber(String),

    #[error("solution computed to degree {available}, but degree {requested} requested")]
    InsufficientDepth { available: usize, requested: usize },

    #[error("invalid builder parameters: {0}")]
    InvalidParams(String),

    #[error("unknown builder family `{0}`")]
    UnknownFamily(String),

    #[error("vertex {vertex} is only {degree}-independent; a compatible connection needs pairwise independent stars")]
    NotThreeIndependent { vertex: String, degree: usize },

    #[error("ambiguous connection: across edge {edge}, {from} has {candidates} compatible targets")]
    AmbiguousMatch { edge: String, from: String, candidates: usize },

    #[error("no compatible target across edge {edge} for {from}")]
    NoMatch { edge: String, from: String },

    #[error("connection across edge {edge} is not a bijection")]
    NotBijective { edge: String },

    #[error("missing length/chern data: {0}")]
    MissingChernData(String),

    #[error("geometry invariant violated: {0}")]
    GeometryInvariant(String),

    #[error("broken path: {0}")]
    BrokenPath(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("product failed the compatibility check on edge {edge}")]
    ResidualViolation { edge: usize },
}

impl GkmError {
    /// Input that could not be read or parsed, as opposed to a
    /// well-formed input that violates a mathematical condition.
    pub fn is_input_error(&self) -> bool {
        matches!(self, GkmError::Parse(_) | GkmError::MalformedGraph(_))
    }
}

pub type Result<T> = std::result::Result<T, GkmError>;
