//! ARMA-GARCH models: parameters, Gaussian likelihood, two-step
//! maximum-likelihood fitting with AIC order selection, and one-step
//! stochastic simulation.

mod fit;
mod likelihood;
pub mod optimizer;
mod params;
mod simulate;

pub use fit::{fit, CandidateResult, Convergence, FitReport, OrderGrid, OrderRange};
pub use likelihood::{aic, arma_residuals, garch_log_likelihood, log_likelihood, log_likelihood_after};
pub use optimizer::OptimizerConfig;
pub use params::{
    ar_from_reflection, reflection_coefficients, validate, ArmaParams, GarchParams, Innovation,
    ModelOrders, RegimeModel, ValidationReport, Violation,
};
pub use simulate::{step, LagBuffer, RecursionState, StepOutput};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EconError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(ValidationReport),

    #[error("likelihood overflow: the filtered log-likelihood is not finite")]
    LikelihoodOverflow,

    #[error("series of length {len} is too short for orders {orders} (need more than {needed})")]
    InsufficientData {
        len: usize,
        needed: usize,
        orders: ModelOrders,
    },

    #[error("degenerate input: series has zero variance")]
    DegenerateInput,

    #[error("series of length {len} is shorter than the configured minimum {min}")]
    SeriesTooShort { len: usize, min: usize },

    #[error("empty order grid")]
    EmptyGrid,

    #[error("no candidate converged on a series of length {len} over grid {grid}")]
    NoConvergence { len: usize, grid: String },

    #[error("variance explosion at step {step}: conditional variance {variance}")]
    VarianceExplosion { step: u64, variance: f64 },

    #[error("recursion state does not match model orders {0}")]
    StateMismatch(ModelOrders),
}
