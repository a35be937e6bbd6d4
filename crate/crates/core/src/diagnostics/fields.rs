use crate::discretization::{gradient, laplacian, Closure, FieldState, RobinEnd, Side};
use crate::real::Real;
use crate::scheme::Scheme;
use crate::thermo::Model;

/// Nodal derivatives of a state.
///
/// `u_x` comes from the analytic mode derivatives, `theta_x` from central
/// differences. The density derivatives use the inflow Robin closure at the
/// walls and are zero when `eps = 0`, where they never enter.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivatives<T> {
    pub u_x: Vec<T>,
    pub theta_x: Vec<T>,
    pub rho_x: Vec<T>,
    pub rho_xx: Vec<T>,
}

impl<T: Real> Derivatives<T> {
    pub fn of(scheme: &Scheme<T>, state: &FieldState<T>) -> Self {
        let h = scheme.grid.h();
        let n = scheme.grid.n_nodes();
        let u_x = state.velocity_gradient(&scheme.basis, &scheme.bd);
        let theta_x = gradient(&state.theta, h).expect("grid has at least three nodes");
        let eps = scheme.params.eps;
        if eps > T::zero() {
            let sigma = scheme.inflow_weights(state.t);
            let rb = Side::BOTH.map(|s| scheme.bd.rho_b(s, state.t));
            let mut rho_x = gradient(&state.rho, h).expect("grid has at least three nodes");
            rho_x[0] = -(state.rho[0] - rb[0]) * sigma[0] / eps;
            rho_x[n - 1] = (state.rho[n - 1] - rb[1]) * sigma[1] / eps;
            let closure = Closure::Robin {
                left: RobinEnd { coeff: sigma[0] / eps, data: rb[0] },
                right: RobinEnd { coeff: sigma[1] / eps, data: rb[1] },
            };
            let rho_xx = laplacian(&state.rho, h, closure).expect("grid has at least four nodes");
            Self { u_x, theta_x, rho_x, rho_xx }
        } else {
            Self { u_x, theta_x, rho_x: vec![T::zero(); n], rho_xx: vec![T::zero(); n] }
        }
    }
}

/// Nodal entropy production `(1/theta)(nu u_x^2 + kappa theta_x^2 / theta)`
/// with the physical coefficients.
pub fn entropy_production_from_fields<T: Real>(theta: &[T], theta_x: &[T], u_x: &[T], model: &Model<T>) -> Vec<T> {
    theta
        .iter()
        .zip(theta_x)
        .zip(u_x)
        .map(|((&th, &tx), &ux)| {
            let nu = model.slab_viscosity(th, T::zero());
            let kappa = model.transport.kappa(th);
            // both summands are products of non-negative factors
            (nu * ux * ux + kappa * (tx * tx) / th) / th
        })
        .collect()
}

/// [`entropy_production_from_fields`] for a scheme state.
pub fn entropy_production_density<T: Real>(scheme: &Scheme<T>, state: &FieldState<T>) -> Vec<T> {
    let d = Derivatives::of(scheme, state);
    entropy_production_from_fields(&state.theta, &d.theta_x, &d.u_x, &scheme.model)
}
