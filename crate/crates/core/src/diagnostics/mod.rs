//! Functionals and inequality checks evaluated on discrete states: entropy
//! production, total and ballistic energy balances, relative energy with its
//! quadratic errors, and the components of the a priori bounds.

mod apriori;
mod balances;
mod extension;
mod fields;
mod reference;
mod relative;
mod report;

pub use apriori::{apriori_components, korn_poincare_constant, AprioriComponents, AprioriSettings};
pub use balances::{
    ballistic_energy, ballistic_residual, energy_breakdown, total_energy_residual, BalanceTerms,
    BalanceVariant, EnergyBreakdown,
};
pub use extension::{harmonic_extension, HarmonicExtension, TemperatureExtension};
pub use fields::{entropy_production_density, entropy_production_from_fields, Derivatives};
pub use reference::{ReferenceTrio, StrongReference};
pub use relative::{
    fit_gronwall, quadratic_errors, relative_energy_density, relative_energy_field, relative_energy_residual,
    weak_strong_monitor, GronwallFit, QuadraticErrors, WeakStrongSeries,
};
pub use report::{DiagnosticsReport, Evaluator, CSV_COLUMNS, CSV_SCHEMA_VERSION};

use crate::discretization::DiscretizationError;
use crate::thermo::ThermoError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("window holds {0} samples, at least 2 are needed")]
    ShortWindow(usize),
    #[error("extension contract violated: {0}")]
    Contract(String),
    #[error("reference trio invalid: {0}")]
    Reference(String),
    #[error("sign invariant violated: {0}")]
    Sign(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Discretization(#[from] DiscretizationError),
    #[error(transparent)]
    Thermo(#[from] ThermoError),
}

#[cfg(test)]
mod tests;
