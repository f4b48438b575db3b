use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("arc {tail}->{head} has negative weight {weight}")]
    NegativeWeight { tail: usize, head: usize, weight: String },

    #[error("loop arc at vertex {0}")]
    LoopArc(usize),

    #[error("duplicate pattern arc {0}->{1}")]
    DuplicatePatternArc(usize, usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unknown arc id {0}")]
    UnknownArc(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} exceeds cap {limit}")]
    CapExceeded { what: &'static str, limit: u64 },

    #[error("time cap of {millis} ms exceeded while {what}")]
    TimeCapExceeded { what: &'static str, millis: u64 },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("host must be unweighted (all weights 1) for {0}")]
    WeightedHost(&'static str),
}

impl Error {
    /// True for errors caused by a resource guard rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::TimeCapExceeded { .. })
    }

    pub fn is_validation(&self) -> bool {
        !self.is_resource_cap() && !matches!(self, Error::Numeric(_))
    }
}
