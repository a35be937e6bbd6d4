//! Time stepper for the regularized system: vanishing-viscosity continuity,
//! Galerkin momentum and regularized internal energy, composed by Lie splitting
//! with backward Euler in each sub-step.

mod continuity;
mod energy;
mod momentum;
mod params;
mod stepper;

pub use continuity::ContinuityOutcome;
pub use energy::{conductivity, EnergyOutcome};
pub use momentum::MomentumOutcome;
pub use params::{RunMode, SchemeParams};
pub use stepper::{ConstantForce, Forcing, NoForcing, Scheme, StepReport, Trajectory};

use crate::discretization::DiscretizationError;
use crate::linalg::LinalgError;
use crate::thermo::ThermoError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchemeError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Discretization(#[from] DiscretizationError),
    #[error(transparent)]
    Thermo(#[from] ThermoError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("{stage} step rejected: {reason} (try dt <= {suggested_dt:e})")]
    Rejected { stage: &'static str, reason: String, suggested_dt: f64 },
    #[error("run aborted at t = {t:e}: {reason}")]
    Aborted { t: f64, reason: String },
}

#[cfg(test)]
mod tests;
