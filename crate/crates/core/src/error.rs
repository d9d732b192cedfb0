use thiserror::Error;

/// Errors produced by the lattice, construction, analysis and search layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter or input lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// No explicit construction covers the requested lattice.
    #[error("no construction known for B_{n}({m},{l})")]
    NoConstruction { n: u32, m: u32, l: u32 },

    /// The lattice has more nodes than the search is allowed to handle.
    #[error("instance too large: {nodes} lattice nodes exceeds the cap of {cap}")]
    TooLarge { nodes: u128, cap: usize },

    /// A sequence of node sets does not form a valid chain.
    #[error("invalid chain: {0}")]
    InvalidChain(String),

    /// Malformed serialized input.
    #[error("format error: {0}")]
    Format(String),

    /// A search produced a witness that failed re-verification.
    #[error("witness rejected: {0}")]
    WitnessRejected(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
