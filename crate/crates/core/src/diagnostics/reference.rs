use crate::diagnostics::DiagnosticsError;
use crate::discretization::{gradient, BoundaryData, FieldState, GalerkinBasis, Grid1D, Side};
use crate::real::Real;

/// Closed-form density, temperature and velocity with the derivatives the
/// relative energy calculus needs.
pub trait ReferenceTrio<T: Real>: Send + Sync {
    fn rho(&self, t: T, x: T) -> T;
    fn theta(&self, t: T, x: T) -> T;
    fn u(&self, t: T, x: T) -> T;
    fn rho_t(&self, t: T, x: T) -> T;
    fn rho_x(&self, t: T, x: T) -> T;
    fn theta_t(&self, t: T, x: T) -> T;
    fn theta_x(&self, t: T, x: T) -> T;
    fn u_t(&self, t: T, x: T) -> T;
    fn u_x(&self, t: T, x: T) -> T;
    fn u_xx(&self, t: T, x: T) -> T;
}

/// Smooth reference trio sampled on the grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct StrongReference<T> {
    pub t: T,
    pub rho: Vec<T>,
    pub theta: Vec<T>,
    pub u: Vec<T>,
    pub rho_t: Vec<T>,
    pub rho_x: Vec<T>,
    pub theta_t: Vec<T>,
    pub theta_x: Vec<T>,
    pub u_t: Vec<T>,
    pub u_x: Vec<T>,
    pub u_xx: Vec<T>,
}

impl<T: Real> StrongReference<T> {
    pub fn from_closed_form(trio: &dyn ReferenceTrio<T>, t: T, grid: &Grid1D<T>) -> Self {
        Self {
            t,
            rho: grid.sample(|x| trio.rho(t, x)),
            theta: grid.sample(|x| trio.theta(t, x)),
            u: grid.sample(|x| trio.u(t, x)),
            rho_t: grid.sample(|x| trio.rho_t(t, x)),
            rho_x: grid.sample(|x| trio.rho_x(t, x)),
            theta_t: grid.sample(|x| trio.theta_t(t, x)),
            theta_x: grid.sample(|x| trio.theta_x(t, x)),
            u_t: grid.sample(|x| trio.u_t(t, x)),
            u_x: grid.sample(|x| trio.u_x(t, x)),
            u_xx: grid.sample(|x| trio.u_xx(t, x)),
        }
    }

    /// References built from a sampled discrete run. Space derivatives by
    /// central differences (`u_x` from the modes), time derivatives by
    /// central differences in the sample times, one-sided at the ends.
    pub fn from_states(
        states: &[FieldState<T>],
        grid: &Grid1D<T>,
        basis: &GalerkinBasis<T>,
        bd: &BoundaryData<T>,
    ) -> Result<Vec<Self>, DiagnosticsError> {
        let h = grid.h();
        let m = states.len();
        let time_derivative = |k: usize, f: &dyn Fn(&FieldState<T>) -> &Vec<T>| -> Vec<T> {
            if m < 2 {
                return vec![T::zero(); grid.n_nodes()];
            }
            let (a, b) = if k == 0 { (0, 1) } else if k == m - 1 { (m - 2, m - 1) } else { (k - 1, k + 1) };
            let dt = states[b].t - states[a].t;
            f(&states[b]).iter().zip(f(&states[a])).map(|(p, q)| (*p - *q) / dt).collect()
        };
        let mut out = Vec::with_capacity(m);
        for (k, s) in states.iter().enumerate() {
            let u_x = s.velocity_gradient(basis, bd);
            let r = Self {
                t: s.t,
                rho: s.rho.clone(),
                theta: s.theta.clone(),
                u: s.u.clone(),
                rho_t: time_derivative(k, &|s| &s.rho),
                rho_x: gradient(&s.rho, h)?,
                theta_t: time_derivative(k, &|s| &s.theta),
                theta_x: gradient(&s.theta, h)?,
                u_t: time_derivative(k, &|s| &s.u),
                u_xx: gradient(&u_x, h)?,
                u_x,
            };
            r.validate(bd)?;
            out.push(r);
        }
        Ok(out)
    }

    /// Positivity and wall traces: `theta~ = theta_B`, `u~ = u_B` to `1e-12`.
    pub fn validate(&self, bd: &BoundaryData<T>) -> Result<(), DiagnosticsError> {
        let bad = |v: &[T]| v.iter().position(|x| !(*x > T::zero()) || !x.is_finite());
        if let Some(i) = bad(&self.rho) {
            return Err(DiagnosticsError::Reference(format!("density {} at node {i}", self.rho[i])));
        }
        if let Some(i) = bad(&self.theta) {
            return Err(DiagnosticsError::Reference(format!("temperature {} at node {i}", self.theta[i])));
        }
        let n = self.rho.len() - 1;
        let tol = T::rel_tol(1e-12);
        for (side, i) in [(Side::Left, 0), (Side::Right, n)] {
            let (tb, ub) = (bd.theta_b(side, self.t), bd.u_b(side, self.t));
            if (self.theta[i] - tb).abs() > tol * tb.abs().max(T::one())
                || (self.u[i] - ub).abs() > tol * ub.abs().max(T::one())
            {
                return Err(DiagnosticsError::Reference(format!(
                    "wall traces ({}, {}) differ from ({tb}, {ub}) on {side:?} at t = {}",
                    self.theta[i], self.u[i], self.t
                )));
            }
        }
        Ok(())
    }
}
