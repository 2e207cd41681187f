use num_bigint::BigUint;
use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("vertex `{0}` has no outgoing edges")]
    Sink(String),
    #[error("vertex `{0}` has no incoming edges")]
    Source(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("unknown edge id `{0}`")]
    UnknownEdge(String),
    #[error("graph is not irreducible")]
    Reducible,
    #[error("period mismatch: graph has period {actual}, requested {requested}")]
    PeriodMismatch { requested: usize, actual: usize },
    #[error("cyclic class {index} out of range for period {period}")]
    ClassOutOfRange { index: usize, period: usize },
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("edge word is not a path: `{0}` cannot follow `{1}`")]
    InconsistentWord(String, String),
    #[error("empty edge word where a nonempty one is required")]
    EmptyWord,
    #[error("cylinder word must have even length 2l with l >= 1, got {0}")]
    BadHalfwidth(usize),
    #[error("ray cylinder has the wrong side for this operation")]
    WrongSide,
    #[error("negative path length {0}")]
    NegativeLength(i64),
    #[error("enumeration cap {cap} exceeded (count {count})")]
    CapExceeded { cap: u64, count: BigUint },
    #[error("heteroclinic set is empty at k = {0}, measure undefined")]
    EmptyHeteroclinicSet(u64),
    #[error("cylinder window halfwidth {l} too wide for k = {k}")]
    WindowTooWide { k: u64, l: usize },
    #[error("ray pieces of a union overlap")]
    OverlappingPieces,
    #[error("points lie in different cyclic components ({0} vs {1})")]
    ComponentMismatch(usize, usize),
    #[error("edge map is not total: domain edge `{0}` unmapped")]
    UnmappedEdge(String),
    #[error("edge map is incompatible with endpoints at domain edge `{0}`")]
    VertexMapConflict(String),
    #[error("edge map misses codomain edge `{0}`")]
    NotSurjective(String),
    #[error("code is not right-resolving")]
    NotRightResolving,
    #[error("no lift of the point exists in the domain")]
    NoLift,
    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
