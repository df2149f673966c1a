//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("continuation failed at the first control value {control}")]
    ContinuationStartFailed { control: f64 },

    #[error("state is not a stable equilibrium: {0}")]
    NotStableEquilibrium(String),

    #[error("AMOC Jacobian requested too close to the Q=0 switching surface (|Q| = {q_abs:.3e})")]
    SwitchingSurface { q_abs: f64 },

    #[error("driver sampling budget exhausted: {attempts} attempts, {models_tried} models tried")]
    SamplingBudgetExhausted { attempts: usize, models_tried: usize },

    #[error("resampling loop exceeded {0} draws")]
    ResamplingCap(usize),

    #[error("episode blew up: non-finite state at step {step}")]
    BlowUp { step: usize },

    #[error("both classes must be present (got {n_pos} positive, {n_neg} negative)")]
    SingleClass { n_pos: usize, n_neg: usize },

    #[error("data error: {0}")]
    Data(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}
