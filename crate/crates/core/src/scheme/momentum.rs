use crate::discretization::FieldState;
use crate::linalg::{max_abs, Dense};
use crate::real::Real;
use crate::scheme::{Scheme, SchemeError};

#[derive(Debug, Clone, PartialEq)]
pub struct MomentumOutcome<T> {
    pub v_coeffs: Vec<T>,
    /// nodal velocity `v + u_B` at the new time
    pub u: Vec<T>,
    pub iterations: usize,
    pub residual: T,
}

impl<T: Real> Scheme<T> {
    /// Regularized pressure `p + delta (rho^Gamma + rho^2)`.
    #[inline]
    pub fn total_pressure(&self, rho: T, theta: T) -> T {
        self.model.eos.pressure_unchecked(rho, theta)
            + self.params.delta * (rho.powf(self.params.gamma) + rho * rho)
    }

    /// Slab viscosity with `mu_delta = mu + delta theta`.
    #[inline]
    pub fn viscosity(&self, theta: T) -> T {
        self.model.slab_viscosity(theta, self.params.delta * theta)
    }

    /// Backward Euler step of the Galerkin momentum balance, tested against
    /// every mode. `rho_new` is the freshly updated density, `theta` the
    /// temperature of the previous step. Newton with a dense Jacobian.
    pub fn step_momentum(
        &self,
        state: &FieldState<T>,
        rho_new: &[T],
        dt: T,
    ) -> Result<MomentumOutcome<T>, SchemeError> {
        let grid = &self.grid;
        let basis = &self.basis;
        let m = basis.n_modes();
        let n = grid.n_nodes();
        let wq = grid.weights();
        let t_new = state.t + dt;
        let ub: Vec<T> = self.bd.u_ext_nodes(t_new, grid);
        let ub_x = self.bd.u_ext_x(t_new);
        let nu: Vec<T> = state.theta.iter().map(|&th| self.viscosity(th)).collect();
        let ptot: Vec<T> = rho_new.iter().zip(&state.theta).map(|(&r, &th)| self.total_pressure(r, th)).collect();
        let g: Vec<T> = grid.x().iter().map(|&x| self.forcing.body_force(t_new, x)).collect();
        let old: Vec<T> = (0..m)
            .map(|j| {
                let wj = basis.values(j);
                (0..n).map(|i| wq[i] * state.rho[i] * state.u[i] * wj[i]).sum()
            })
            .collect();
        // velocity independent part of the residual
        let fixed: Vec<T> = (0..m)
            .map(|j| {
                let (wj, dj) = (basis.values(j), basis.derivatives(j));
                (0..n).map(|i| wq[i] * (ptot[i] * dj[i] + rho_new[i] * g[i] * wj[i])).sum()
            })
            .collect();

        let scale = old.iter().chain(&fixed).fold(T::one(), |s, v| s.max(v.abs()));
        let tol = self.params.newton_tol;
        let mut c = state.v_coeffs.clone();
        let mut last = T::infinity();
        for iter in 0..=self.params.max_newton {
            let v = basis.reconstruct(&c);
            let vx = basis.reconstruct_derivative(&c);
            let u: Vec<T> = v.iter().zip(&ub).map(|(a, b)| *a + *b).collect();
            let ux: Vec<T> = vx.iter().map(|a| *a + ub_x).collect();
            let mut res = vec![T::zero(); m];
            for (j, r) in res.iter_mut().enumerate() {
                let (wj, dj) = (basis.values(j), basis.derivatives(j));
                let mut acc = T::zero();
                for i in 0..n {
                    let flux = rho_new[i] * u[i] * u[i] - nu[i] * ux[i];
                    acc += wq[i] * (rho_new[i] * u[i] * wj[i] - dt * flux * dj[i]);
                }
                *r = acc - old[j] - dt * fixed[j];
            }
            last = max_abs(&res) / scale;
            if last <= tol {
                return Ok(MomentumOutcome { v_coeffs: c, u, iterations: iter, residual: last });
            }
            if iter == self.params.max_newton || !last.is_finite() {
                break;
            }
            let mut jac = Dense::zeros(m);
            for j in 0..m {
                let (wj, dj) = (basis.values(j), basis.derivatives(j));
                for k in 0..m {
                    let (wk, dk) = (basis.values(k), basis.derivatives(k));
                    let mut acc = T::zero();
                    for i in 0..n {
                        let two = T::lit(2.0);
                        acc += wq[i]
                            * (rho_new[i] * wk[i] * wj[i]
                                - dt * (two * rho_new[i] * u[i] * wk[i] - nu[i] * dk[i]) * dj[i]);
                    }
                    jac.set(j, k, acc);
                }
            }
            let step = jac.solve(&res)?;
            for (ci, si) in c.iter_mut().zip(step) {
                *ci -= si;
            }
        }
        Err(SchemeError::Rejected {
            stage: "momentum",
            reason: format!("Newton stalled at relative residual {last:e}"),
            suggested_dt: dt.as_f64() * 0.5,
        })
    }
}
