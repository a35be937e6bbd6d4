//! Regularized solver and diagnostics for the compressible
//! Navier-Stokes-Fourier system on a one-dimensional slab with inflow/outflow
//! boundary data.

pub mod diagnostics;
pub mod discretization;
pub mod linalg;
pub mod quadrature;
pub mod real;
pub mod scheme;
pub mod thermo;

pub use real::Real;

/// Double precision instantiations.
pub mod f64 {
    pub type EquationOfState = crate::thermo::EquationOfState<f64>;
    pub type TransportModel = crate::thermo::TransportModel<f64>;
    pub type Model = crate::thermo::Model<f64>;
    pub type ThermoPoint = crate::thermo::ThermoPoint<f64>;
    pub type Grid1D = crate::discretization::Grid1D<f64>;
    pub type BoundaryData = crate::discretization::BoundaryData<f64>;
    pub type FieldState = crate::discretization::FieldState<f64>;
    pub type SchemeParams = crate::scheme::SchemeParams<f64>;
    pub type Scheme = crate::scheme::Scheme<f64>;
    pub type StrongReference = crate::diagnostics::StrongReference<f64>;
}

/// Single precision instantiations.
pub mod f32 {
    pub type EquationOfState = crate::thermo::EquationOfState<f32>;
    pub type TransportModel = crate::thermo::TransportModel<f32>;
    pub type Model = crate::thermo::Model<f32>;
    pub type ThermoPoint = crate::thermo::ThermoPoint<f32>;
    pub type Grid1D = crate::discretization::Grid1D<f32>;
    pub type BoundaryData = crate::discretization::BoundaryData<f32>;
    pub type FieldState = crate::discretization::FieldState<f32>;
    pub type SchemeParams = crate::scheme::SchemeParams<f32>;
    pub type Scheme = crate::scheme::Scheme<f32>;
    pub type StrongReference = crate::diagnostics::StrongReference<f32>;
}
