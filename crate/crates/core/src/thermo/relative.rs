use crate::real::Real;
use crate::thermo::{ConservativeState, EquationOfState, ThermoError, ThermoPoint};

/// `(rho, theta, u) -> (rho, rho s, rho u)`.
pub fn to_conservative<T: Real>(
    pt: ThermoPoint<T>,
    u: T,
    eos: &EquationOfState<T>,
) -> Result<ConservativeState<T>, ThermoError> {
    let s = eos.entropy(pt)?;
    Ok(ConservativeState { rho: pt.rho(), total_entropy: pt.rho() * s, momentum: pt.rho() * u })
}

/// Inverse of [`to_conservative`]; the temperature comes from a monotone
/// root find of `s(rho, theta) = S / rho`.
pub fn to_primitive<T: Real>(
    cs: &ConservativeState<T>,
    eos: &EquationOfState<T>,
) -> Result<(ThermoPoint<T>, T), ThermoError> {
    if !(cs.rho > T::zero()) {
        return Err(ThermoError::Domain(format!("conservative density must be positive, got {}", cs.rho)));
    }
    let theta = eos.theta_from_entropy(cs.rho, cs.total_entropy / cs.rho)?;
    Ok((ThermoPoint::new(cs.rho, theta)?, cs.momentum / cs.rho))
}

/// `E(rho, S, m) = |m|^2 / (2 rho) + rho e(rho, S)`.
pub fn energy_functional<T: Real>(
    cs: &ConservativeState<T>,
    eos: &EquationOfState<T>,
) -> Result<T, ThermoError> {
    let (pt, _) = to_primitive(cs, eos)?;
    Ok(T::lit(0.5) * cs.momentum * cs.momentum / cs.rho + eos.energy_density(pt.rho(), pt.theta()))
}

/// Relative energy of `(rho, theta, u)` with respect to `(rho~, theta~, u~)`,
/// in the expanded form
/// `1/2 rho |u - u~|^2 + rho e - theta~ rho s - (e~ - theta~ s~ + p~/rho~) rho + p~`.
pub fn relative_energy<T: Real>(
    pt: ThermoPoint<T>,
    u: T,
    ref_pt: ThermoPoint<T>,
    ref_u: T,
    eos: &EquationOfState<T>,
) -> T {
    let (rho, theta) = (pt.rho(), pt.theta());
    let (rr, tr) = (ref_pt.rho(), ref_pt.theta());
    let pr = eos.pressure_unchecked(rr, tr);
    let gibbs_ref = eos.internal_energy_unchecked(rr, tr) - tr * eos.entropy_unchecked(rr, tr) + pr / rr;
    let du = u - ref_u;
    T::lit(0.5) * rho * du * du + eos.energy_density(rho, theta)
        - tr * rho * eos.entropy_unchecked(rho, theta)
        - gibbs_ref * rho
        + pr
}

/// Bregman distance `E(U) - <dE(U~), U - U~> - E(U~)` with the closed-form
/// gradient `(e - theta s + p/rho - |u|^2/2, theta, u)` at the reference.
pub fn bregman_decomposition<T: Real>(
    cs: &ConservativeState<T>,
    ref_cs: &ConservativeState<T>,
    eos: &EquationOfState<T>,
) -> Result<T, ThermoError> {
    let (ref_pt, ref_u) = to_primitive(ref_cs, eos)?;
    let (rr, tr) = (ref_pt.rho(), ref_pt.theta());
    let e_cur = energy_functional(cs, eos)?;
    let e_ref = energy_functional(ref_cs, eos)?;
    let d_rho = eos.internal_energy_unchecked(rr, tr) - tr * eos.entropy_unchecked(rr, tr)
        + eos.pressure_unchecked(rr, tr) / rr
        - T::lit(0.5) * ref_u * ref_u;
    let inner = d_rho * (cs.rho - ref_cs.rho)
        + tr * (cs.total_entropy - ref_cs.total_entropy)
        + ref_u * (cs.momentum - ref_cs.momentum);
    Ok(e_cur - inner - e_ref)
}
