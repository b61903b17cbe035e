use thiserror::Error;

/// Errors raised by the protocol library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A caller-supplied object violates a stated contract (e.g. a measurement
    /// vector that is not normalized).
    #[error("contract violation: {0}")]
    Contract(String),

    /// The resource is a product state (chi = 0); no matched basis exists.
    #[error("degenerate resource: {0}")]
    DegenerateResource(String),

    /// A family does not have the sector structure the protocol produces.
    #[error("structure violation: {0}")]
    StructureViolation(String),

    /// The branch has zero probability, so its conditional state is undefined.
    #[error("undefined branch: {0}")]
    UndefinedBranch(String),

    /// Unknown fixture tag or table row label.
    #[error("lookup error: {0}")]
    Lookup(String),

    /// Gauss-Legendre estimates at two orders disagree beyond tolerance.
    #[error("quadrature did not converge: |F(order {low}) - F(order {high})| = {delta:e}")]
    Quadrature { low: usize, high: usize, delta: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
