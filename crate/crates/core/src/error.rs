use alloc::string::String;

use crate::dyadic::DyadicError;

/// Errors raised by the certified computations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Dyadic(#[from] DyadicError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed polynomial descriptor: {0}")]
    Descriptor(String),
    #[error("degenerate leading coefficient: |a_d| could not be bounded away from zero")]
    DegenerateLeadingCoefficient,
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("a root lies on or too close to the search region boundary; inflate the region")]
    BoundaryAmbiguity,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("metric undefined for empty cell sets")]
    EmptySet,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
