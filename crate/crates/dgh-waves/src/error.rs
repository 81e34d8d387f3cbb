//! Error type shared by all modules of the crate.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DghError {
    /// alpha = gamma = 0 degenerates to an inviscid Burgers equation,
    /// which has no bounded travelling waves of the kinds handled here.
    #[error("the case alpha = 0 and gamma = 0 (inviscid Burgers) is excluded")]
    BurgersCaseExcluded,

    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    /// The quadrature denominator vanishes at `phi`.
    #[error("potential has a pole at phi = {0}; the pole is not root-cancelled")]
    PoleEvaluation(f64),

    /// Requested a pole-related quantity with alpha = 0.
    #[error("no pole exists when alpha = 0")]
    NoPole,

    /// F must be strictly positive inside a synthesis interval.
    #[error("potential is not positive inside the interval: F({phi}) = {value}")]
    InvalidInterval { phi: f64, value: f64 },

    /// A synthesis routine was called with a class it cannot realize.
    #[error("wrong wave class for this operation: {0}")]
    WrongClass(String),

    #[error("incompatible composite segments: {0}")]
    IncompatibleSegments(String),

    /// Plateaus of positive measure require A to equal the stumpon constant.
    #[error("stumpon constant violated: A = {got}, required A* = {expected}")]
    StumponConstantViolated { got: f64, expected: f64 },

    #[error("solution blew up at t = {0}")]
    Blowup(f64),

    #[error("time step {dt} rejected by the CFL guard (limit {limit})")]
    CflViolated { dt: f64, limit: f64 },

    #[error("invalid spectral grid: {0}")]
    InvalidGrid(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, DghError>;
