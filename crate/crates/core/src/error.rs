//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors reported by constructors, parsers and simulation entry points.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A Bloch vector was not unit length (checked to 1e-9).
    #[error("bloch vector has norm {norm}, expected 1 within 1e-9")]
    NonUnitBloch { norm: f64 },

    /// A state vector was not normalized (checked to 1e-12).
    #[error("state vector has squared norm {norm_sq}, expected 1 within 1e-12")]
    UnnormalizedState { norm_sq: f64 },

    /// A criticality index outside {+1, -1}.
    #[error("criticality index must be +1 or -1, got {0}")]
    InvalidCriticality(i32),

    /// Overlaid chains must have equal length.
    #[error("chain lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Overlay quality is undefined for empty chains.
    #[error("overlay of empty chains is undefined")]
    EmptyChains,

    /// A weight vector over the deterministic strategies was invalid.
    #[error("invalid strategy weights: {0}")]
    InvalidWeights(String),

    /// A strategy spec string could not be parsed.
    #[error("cannot parse strategy spec `{spec}`: {reason}")]
    ParseStrategy { spec: String, reason: String },

    /// A serialized chain could not be parsed.
    #[error("cannot parse chain: {0}")]
    ParseChain(String),

    /// A timeline configuration or mode violated its preconditions.
    #[error("invalid timeline config: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
