use thiserror::Error;

/// Errors raised by the library. Every variant describes a rejected input;
/// nothing here is recoverable by retrying.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("edge {0} is already present")]
    EdgePresent(String),

    #[error("rank {rank} out of range for C({n}, {r}) = {total}")]
    RankOutOfRange { rank: u64, n: u32, r: u32, total: u64 },

    #[error("parameters violate {0}")]
    Parameters(String),

    #[error("uniformity mismatch: host graph is {host}-uniform, pattern is {pattern}-uniform")]
    UniformityMismatch { host: u32, pattern: u32 },

    #[error("pattern has no edges")]
    EmptyPattern,

    #[error("edge universe C({n}, {r}) = {size} exceeds the limit of {limit}")]
    UniverseTooLarge { n: u32, r: u32, size: u128, limit: u64 },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("certificate kind mismatch: expected {expected}, found {found}")]
    CertificateKind { expected: &'static str, found: &'static str },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn params(msg: impl Into<String>) -> Error {
    Error::Parameters(msg.into())
}
