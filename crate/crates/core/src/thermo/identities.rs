use crate::real::Real;
use crate::thermo::{EquationOfState, ThermoPoint};

/// Componentwise Gibbs residuals
/// `(theta s_theta - e_theta, theta s_rho - e_rho + p / rho^2)`
/// from central differences with relative step `h`.
pub fn gibbs_residuals<T: Real>(pt: ThermoPoint<T>, eos: &EquationOfState<T>, h: T) -> (T, T) {
    let (rho, theta) = (pt.rho(), pt.theta());
    let two = T::lit(2.0);
    let ht = h * theta;
    let hr = h * rho;
    let s_t = (eos.entropy_unchecked(rho, theta + ht) - eos.entropy_unchecked(rho, theta - ht)) / (two * ht);
    let e_t = (eos.internal_energy_unchecked(rho, theta + ht)
        - eos.internal_energy_unchecked(rho, theta - ht))
        / (two * ht);
    let s_r = (eos.entropy_unchecked(rho + hr, theta) - eos.entropy_unchecked(rho - hr, theta)) / (two * hr);
    let e_r = (eos.internal_energy_unchecked(rho + hr, theta)
        - eos.internal_energy_unchecked(rho - hr, theta))
        / (two * hr);
    let p = eos.pressure_unchecked(rho, theta);
    (theta * s_t - e_t, theta * s_r - e_r + p / (rho * rho))
}

/// `(dp/drho, de/dtheta)` by central differences with relative step `h`.
pub fn thermodynamic_stability<T: Real>(pt: ThermoPoint<T>, eos: &EquationOfState<T>, h: T) -> (T, T) {
    let (rho, theta) = (pt.rho(), pt.theta());
    let two = T::lit(2.0);
    let (hr, ht) = (h * rho, h * theta);
    let p_r = (eos.pressure_unchecked(rho + hr, theta) - eos.pressure_unchecked(rho - hr, theta)) / (two * hr);
    let e_t = (eos.internal_energy_unchecked(rho, theta + ht)
        - eos.internal_energy_unchecked(rho, theta - ht))
        / (two * ht);
    (p_r, e_t)
}
