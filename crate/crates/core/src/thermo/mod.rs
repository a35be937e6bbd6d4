//! Constitutive theory: pressure, internal energy, entropy, transport
//! coefficients, the conservative energy functional and the relative energy.

mod eos;
mod identities;
mod relative;
mod transport;
pub mod validate;

pub use eos::{
    EquationOfState, Partials, PressureLaw, QuadraticPressure, SaturatingPressure,
    StructuralPressure,
};
pub use identities::{gibbs_residuals, thermodynamic_stability};
pub use relative::{
    bregman_decomposition, energy_functional, relative_energy, to_conservative, to_primitive,
};
pub use transport::{
    conductivity_primitive, heat_flux, slab_stress_coefficient, viscous_stress, TransportModel,
};

use crate::real::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ThermoError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division domain error: {0}")]
    Division(String),
    #[error("domain overflow: {0}")]
    Overflow(String),
    #[error("inversion failure: {0}")]
    Inversion(String),
}

/// Strictly positive density and temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint<T> {
    rho: T,
    theta: T,
}

impl<T: Real> ThermoPoint<T> {
    pub fn new(rho: T, theta: T) -> Result<Self, ThermoError> {
        if rho > T::zero() && theta > T::zero() && rho.is_finite() && theta.is_finite() {
            Ok(Self { rho, theta })
        } else {
            Err(ThermoError::Domain(format!(
                "density and temperature must be positive and finite, got ({rho}, {theta})"
            )))
        }
    }

    #[inline]
    pub fn rho(&self) -> T {
        self.rho
    }

    #[inline]
    pub fn theta(&self) -> T {
        self.theta
    }
}

/// Conservative entropy variables `(rho, S = rho s, m = rho u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConservativeState<T> {
    pub rho: T,
    pub total_entropy: T,
    pub momentum: T,
}

/// Constitutive model of the fluid: equation of state, transport coefficients
/// and the spatial dimension entering the deviatoric part of the stress.
#[derive(Debug, Clone)]
pub struct Model<T> {
    pub eos: EquationOfState<T>,
    pub transport: TransportModel<T>,
    /// `d` in the traceless part `2/d div u I`
    pub d_eff: T,
}

impl<T: Real> Default for Model<T> {
    fn default() -> Self {
        Self { eos: EquationOfState::default(), transport: TransportModel::default(), d_eff: T::lit(3.0) }
    }
}

impl<T: Real> Model<T> {
    /// Coefficient `nu` of the slab stress `S_xx = nu u_x` at temperature
    /// `theta`, with the shear viscosity augmented by `extra_shear`.
    #[inline]
    pub fn slab_viscosity(&self, theta: T, extra_shear: T) -> T {
        slab_stress_coefficient(
            self.transport.mu(theta) + extra_shear,
            self.transport.eta(theta),
            self.d_eff,
        )
    }

    /// Temperature derivative of [`Self::slab_viscosity`] (the augmentation is
    /// passed as its own derivative).
    #[inline]
    pub fn slab_viscosity_derivative(&self, theta: T, extra_shear_derivative: T) -> T {
        slab_stress_coefficient(
            self.transport.mu_derivative(theta) + extra_shear_derivative,
            self.transport.eta_derivative(theta),
            self.d_eff,
        )
    }
}
