use thiserror::Error;

/// Errors raised by the proof pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("precision of {requested} digits is below the minimum of {minimum}")]
    PrecisionTooLow { requested: u32, minimum: u32 },

    #[error("root refinement did not converge after {iterations} iterations")]
    RootNotConverged { iterations: u32 },

    /// A sign, floor or nearest-integer decision could not be certified at the
    /// working precision. The caller should retry with more digits.
    #[error("unresolved at working precision: {0}")]
    Unresolved(String),

    /// The continued fraction ran out of certified partial quotients.
    #[error("continued fraction exhausted after {certified} certified partial quotients")]
    PrecisionExhausted { certified: usize },

    #[error("no convergent with positive epsilon among {attempts} candidates")]
    NoPositiveEpsilon { attempts: usize },

    #[error("operation requires corrected-mode roots")]
    RequiresCorrectedMode,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
