use crate::discretization::{FieldState, Side};
use crate::linalg::{max_abs, Tridiagonal};
use crate::real::Real;
use crate::scheme::{Scheme, SchemeError};

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyOutcome<T> {
    pub theta: Vec<T>,
    pub iterations: usize,
    pub residual: T,
    /// max relative change of theta in the final monotone inversion
    pub inversion_gap: T,
}

/// Regularized conductivity `delta (theta^Gamma + 1/theta) + kappa(theta)`
/// and its derivative.
#[inline]
pub fn conductivity<T: Real>(scheme: &Scheme<T>, theta: T) -> (T, T) {
    let (d, g) = (scheme.params.delta, scheme.params.gamma);
    let tr = &scheme.model.transport;
    let k = d * (theta.powf(g) + T::one() / theta) + tr.kappa(theta);
    let dk = d * (g * theta.powf(g - T::one()) - T::one() / (theta * theta)) + tr.kappa_derivative(theta);
    (k, dk)
}

impl<T: Real> Scheme<T> {
    /// `rho (e + delta theta)` and its temperature derivative.
    #[inline]
    pub fn regularized_energy(&self, rho: T, theta: T) -> (T, T) {
        let pa = self.model.eos.partials(rho, theta);
        let d = self.params.delta;
        (rho * (pa.e + d * theta), rho * (pa.e_theta + d))
    }

    /// Backward Euler finite-volume step of the regularized internal energy
    /// balance at interior nodes, Dirichlet temperature at the walls.
    ///
    /// `rho_old`/`theta` are the fields at the start of the step, `rho_new`,
    /// `u_new` the results of the preceding sub-steps.
    pub fn step_energy(
        &self,
        state: &FieldState<T>,
        rho_new: &[T],
        u_new: &[T],
        ux_new: &[T],
        dt: T,
    ) -> Result<EnergyOutcome<T>, SchemeError> {
        let grid = &self.grid;
        let n = grid.n_nodes();
        let h = grid.h();
        let half = T::lit(0.5);
        let two = T::lit(2.0);
        let t_new = state.t + dt;
        let (eps, delta, gamma) = (self.params.eps, self.params.delta, self.params.gamma);
        let eos = &self.model.eos;

        let old: Vec<T> = (0..n).map(|i| self.regularized_energy(state.rho[i], state.theta[i]).0).collect();
        let rho_x = crate::discretization::gradient(rho_new, h)?;
        // temperature independent sources
        let fixed: Vec<T> = (0..n)
            .map(|i| {
                let r = rho_new[i];
                eps * delta * (gamma * r.powf(gamma - two) + two) * rho_x[i] * rho_x[i]
                    + self.forcing.energy_source(t_new, grid.x()[i])
            })
            .collect();

        let mut theta = state.theta.clone();
        theta[0] = self.bd.theta_b(Side::Left, t_new);
        theta[n - 1] = self.bd.theta_b(Side::Right, t_new);
        let scale = old.iter().fold(T::one(), |m, v| m.max(v.abs())) * h / dt;
        let tol = self.params.newton_tol;
        let mut last = T::infinity();
        let mut res = vec![T::zero(); n];
        for iter in 0..=self.params.max_newton {
            let en: Vec<(T, T)> = (0..n).map(|i| self.regularized_energy(rho_new[i], theta[i])).collect();
            let kk: Vec<(T, T)> = theta.iter().map(|&th| conductivity(self, th)).collect();
            let mut jac = Tridiagonal::zeros(n);
            res.iter_mut().for_each(|r| *r = T::zero());
            for i in 1..n - 1 {
                let th = theta[i];
                let pa = eos.partials(rho_new[i], th);
                let nu = self.viscosity(th);
                let dnu = self.model.slab_viscosity_derivative(th, delta);
                let ux = ux_new[i];
                let source = nu * ux * ux - pa.p * ux + delta / (th * th) - eps * th.powi(5) + fixed[i];
                let dsource = dnu * ux * ux - pa.p_theta * ux
                    - two * delta / (th * th * th)
                    - T::lit(5.0) * eps * th.powi(4);
                // faces i-1/2 and i+1/2
                let conv_r = half * (en[i].0 * u_new[i] + en[i + 1].0 * u_new[i + 1]);
                let conv_l = half * (en[i - 1].0 * u_new[i - 1] + en[i].0 * u_new[i]);
                let kr = half * (kk[i].0 + kk[i + 1].0);
                let kl = half * (kk[i - 1].0 + kk[i].0);
                let gr = (theta[i + 1] - th) / h;
                let gl = (th - theta[i - 1]) / h;
                res[i] = h * (en[i].0 - old[i]) / dt + conv_r - conv_l - kr * gr + kl * gl - h * source;
                // the two convective faces cancel on the diagonal
                jac.diag[i] = h * en[i].1 / dt - half * kk[i].1 * gr
                    + kr / h
                    + half * kk[i].1 * gl
                    + kl / h
                    - h * dsource;
                jac.upper[i] = half * en[i + 1].1 * u_new[i + 1] - half * kk[i + 1].1 * gr - kr / h;
                jac.lower[i] = -half * en[i - 1].1 * u_new[i - 1] + half * kk[i - 1].1 * gl - kl / h;
            }
            last = max_abs(&res) / scale;
            if last <= tol {
                return self.finish_energy(rho_new, en, theta, iter, last);
            }
            if iter == self.params.max_newton || !last.is_finite() {
                break;
            }
            // wall rows pin the Dirichlet data
            jac.diag[0] = T::one();
            jac.diag[n - 1] = T::one();
            let step = jac.solve(&res)?;
            // damping keeps every temperature above half its current value
            let mut lambda = T::one();
            for i in 1..n - 1 {
                if step[i] > half * theta[i] {
                    lambda = lambda.min(half * theta[i] / step[i]);
                }
            }
            for i in 1..n - 1 {
                theta[i] -= lambda * step[i];
            }
        }
        Err(SchemeError::Rejected {
            stage: "energy",
            reason: format!("Newton stalled at relative residual {last:e}"),
            suggested_dt: dt.as_f64() * 0.5,
        })
    }

    fn finish_energy(
        &self,
        rho_new: &[T],
        en: Vec<(T, T)>,
        theta: Vec<T>,
        iterations: usize,
        residual: T,
    ) -> Result<EnergyOutcome<T>, SchemeError> {
        let n = theta.len();
        let mut out = theta.clone();
        let mut gap = T::zero();
        for i in 1..n - 1 {
            let th = self
                .model
                .eos
                .theta_from_energy_density(rho_new[i], self.params.delta, en[i].0)?;
            gap = gap.max((th - theta[i]).abs() / theta[i]);
            out[i] = th;
        }
        if let Some(i) = out.iter().position(|t| !(*t > T::zero()) || !t.is_finite()) {
            return Err(SchemeError::Rejected {
                stage: "energy",
                reason: format!("temperature {} at node {i}", out[i]),
                suggested_dt: 0.0,
            });
        }
        Ok(EnergyOutcome { theta: out, iterations, residual, inversion_gap: gap })
    }
}
