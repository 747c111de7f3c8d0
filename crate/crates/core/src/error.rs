use thiserror::Error;

/// Errors raised by the lattice, model and ensemble code.
#[derive(Debug, Error)]
pub enum Error {
    /// A volume or operator would exceed the configured qubit cap.
    #[error("size limit exceeded: {sites} sites requested, qubit cap is {cap}")]
    SizeLimit { sites: usize, cap: usize },

    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive search would exceed its configured bound.
    #[error("capability error: {0}")]
    Capability(String),

    /// A term reaches outside `Λ ∪ Λ^∂`, which contradicts the interaction range.
    #[error("internal consistency error: {0}")]
    Consistency(String),

    /// Eigensolver failure or violated numerical invariant.
    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("cannot build a codebook for an empty typical subspace")]
    EmptySubspace,

    #[error("invalid codeword {codeword}: {reason}")]
    InvalidCodeword { codeword: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
