use crate::discretization::{FieldState, NegativePart, Side};
use crate::linalg::Tridiagonal;
use crate::real::Real;
use crate::scheme::{Scheme, SchemeError};

/// Result of the density sub-step.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuityOutcome<T> {
    pub rho: Vec<T>,
    /// outward mass flux `rho u . n - (rho - rho_B) [u_B . n]_n^-` at each wall
    pub boundary_flux: [T; 2],
    /// `sum w (rho_new - rho_old)/dt + B_0 + B_N - sum w f` (the telescope defect)
    pub mass_defect: T,
    /// max cell Peclet number `|u| h / eps`; positivity is guaranteed below 2
    pub peclet: T,
}

impl<T: Real> Scheme<T> {
    /// Smoothed inflow weights `[u_B . n]_n^-` at both walls.
    pub fn inflow_weights(&self, t: T) -> [T; 2] {
        let np = NegativePart::new(self.params.smoothing, self.params.n_smooth);
        Side::BOTH.map(|s| np.eval(self.bd.normal_velocity(s, t)))
    }

    /// Backward Euler finite-volume step of `rho_t + (rho u)_x = eps rho_xx + f`
    /// with the smoothed inflow Robin closure. `u` is the advecting velocity at
    /// the nodes.
    pub fn step_continuity(&self, state: &FieldState<T>, u: &[T], dt: T) -> Result<ContinuityOutcome<T>, SchemeError> {
        let grid = &self.grid;
        let n = grid.n_nodes();
        let h = grid.h();
        let w = grid.weights();
        let eps = self.params.eps;
        let t_new = state.t + dt;
        let half = T::lit(0.5);
        let sigma = self.inflow_weights(t_new);
        let rho_b = Side::BOTH.map(|s| self.bd.rho_b(s, t_new));
        let src: Vec<T> = grid.x().iter().map(|&x| self.forcing.mass_source(t_new, x)).collect();
        let d = eps / h;

        let mut a = Tridiagonal::zeros(n);
        let mut rhs = vec![T::zero(); n];
        for i in 0..n {
            a.diag[i] = w[i] / dt;
            rhs[i] = w[i] * (state.rho[i] / dt + src[i]);
        }
        for i in 0..n {
            if i + 1 < n {
                // face i+1/2: +F to row i, -F to row i+1
                a.diag[i] += half * u[i] + d;
                a.upper[i] = half * u[i + 1] - d;
                a.lower[i + 1] = -half * u[i] - d;
                a.diag[i + 1] += -half * u[i + 1] + d;
            }
        }
        // wall fluxes B = rho u n - (rho - rho_B) sigma
        a.diag[0] += -u[0] - sigma[0];
        rhs[0] -= rho_b[0] * sigma[0];
        a.diag[n - 1] += u[n - 1] - sigma[1];
        rhs[n - 1] -= rho_b[1] * sigma[1];

        let rho = a.solve(&rhs)?;
        let peclet = if eps > T::zero() {
            u.iter().fold(T::zero(), |m, v| m.max(v.abs())) * h / eps
        } else {
            T::infinity()
        };
        if let Some(i) = rho.iter().position(|r| !(*r > T::zero()) || !r.is_finite()) {
            let umax = u.iter().fold(T::zero(), |m, v| m.max(v.abs()));
            return Err(SchemeError::Rejected {
                stage: "continuity",
                reason: format!("density {} at node {i} (cell Peclet {peclet})", rho[i]),
                suggested_dt: (h / umax.max(T::epsilon())).as_f64() * 0.5,
            });
        }
        let flux = [
            -rho[0] * u[0] - (rho[0] - rho_b[0]) * sigma[0],
            rho[n - 1] * u[n - 1] - (rho[n - 1] - rho_b[1]) * sigma[1],
        ];
        let mut defect = flux[0] + flux[1];
        for i in 0..n {
            defect += w[i] * ((rho[i] - state.rho[i]) / dt - src[i]);
        }
        Ok(ContinuityOutcome { rho, boundary_flux: flux, mass_defect: defect, peclet })
    }
}
