//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or operation was handed a configuration that violates a
    /// structural invariant (non-integer finger count, bad grid, ...).
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Material inputs produced a non-physical derived constant.
    #[error("invalid material: {0}")]
    InvalidMaterial(String),

    /// A precondition on an argument's domain was violated.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed to converge or validate.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Two response-function poles are too close for the simple-pole residue
    /// formula.
    #[error("degenerate poles: separation {separation:e} below threshold {threshold:e}")]
    DegeneratePoles { separation: f64, threshold: f64 },

    /// Norm conservation broke down during time stepping.
    #[error("integrator failure at step {step}: norm {norm} drifted beyond tolerance")]
    IntegratorFailure { step: usize, norm: f64 },

    /// Requested real-space sampling cannot resolve the field's bandwidth.
    #[error("aliasing: grid spacing {dx} exceeds pi/k_cut = {max_dx}")]
    Aliasing { dx: f64, max_dx: f64 },

    /// Too few samples for a spectral estimate.
    #[error("insufficient data: got {got} samples, need at least {need}")]
    InsufficientData { got: usize, need: usize },

    /// A root bracket could not be established.
    #[error("no solution: {0}")]
    NoSolution(String),

    /// I/O or parse failure on a config file.
    #[error("config parse error: {0}")]
    ConfigParse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
