use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("budget of {budget} exceeded while {what}")]
    BudgetExceeded { what: String, budget: u64 },

    #[error("{what} = {value} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
    },

    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("cone does not factor through the limit")]
    NoFactorization,

    #[error("maps do not share domain and codomain")]
    MismatchedEndpoints,

    #[error("partitions live on different ground sets ({0} vs {1} elements)")]
    GroundMismatch(usize, usize),

    #[error("node `{node}` has {size} elements; at most 2 are allowed")]
    OversizedNode { node: String, size: usize },

    #[error("unsupported field size {0}; expected one of 2, 3, 5")]
    UnsupportedField(u32),

    #[error("choice is not coherent: {0}")]
    Incoherent(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. } | Error::BoundExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
