use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("weight bound exceeded: (n+2)(W+3) must stay below 2^60 (n={n}, W={w})")]
    Overflow { n: usize, w: u64 },
    #[error("negative edge {edge} ({tail}->{head}, weight {weight}) where nonnegative weights are required")]
    NegativeWeight { edge: usize, tail: usize, head: usize, weight: i64 },
    #[error("edge {edge} ({tail}->{head}, weight {weight}) is negative inside a strongly connected component")]
    IntraSccNegative { edge: usize, tail: usize, head: usize, weight: i64 },
    #[error("vertex {0} is not in the region")]
    NotInRegion(usize),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("not a restricted instance: {0}")]
    NotRestricted(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("no negative cycle reachable from the source")]
    NoNegativeCycle,
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
