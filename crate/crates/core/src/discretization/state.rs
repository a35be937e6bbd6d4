use crate::discretization::{check_len, BoundaryData, DiscretizationError, GalerkinBasis, Grid1D, Side};
use crate::real::Real;

/// Discrete fields at one instant. The velocity is `u = v + u_B` with `v`
/// stored through its Galerkin coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<T> {
    pub t: T,
    pub rho: Vec<T>,
    pub theta: Vec<T>,
    pub v_coeffs: Vec<T>,
    pub u: Vec<T>,
}

impl<T: Real> FieldState<T> {
    /// Builds a state and reconstructs the nodal velocity.
    pub fn new(
        t: T,
        rho: Vec<T>,
        theta: Vec<T>,
        v_coeffs: Vec<T>,
        grid: &Grid1D<T>,
        basis: &GalerkinBasis<T>,
        bd: &BoundaryData<T>,
    ) -> Result<Self, DiscretizationError> {
        check_len(grid.n_nodes(), rho.len())?;
        check_len(grid.n_nodes(), theta.len())?;
        check_len(basis.n_modes(), v_coeffs.len())?;
        let mut s = Self { t, rho, theta, v_coeffs, u: Vec::new() };
        s.refresh_velocity(grid, basis, bd);
        Ok(s)
    }

    /// Recomputes `u` from the coefficients and the boundary extension.
    pub fn refresh_velocity(&mut self, grid: &Grid1D<T>, basis: &GalerkinBasis<T>, bd: &BoundaryData<T>) {
        let v = basis.reconstruct(&self.v_coeffs);
        self.u = grid.x().iter().zip(v).map(|(&x, v)| v + bd.u_ext(self.t, x)).collect();
    }

    /// `u_x` from the analytic mode derivatives and the extension slope.
    pub fn velocity_gradient(&self, basis: &GalerkinBasis<T>, bd: &BoundaryData<T>) -> Vec<T> {
        let slope = bd.u_ext_x(self.t);
        basis.reconstruct_derivative(&self.v_coeffs).into_iter().map(|d| d + slope).collect()
    }

    pub fn min_rho(&self) -> T {
        self.rho.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn min_theta(&self) -> T {
        self.theta.iter().copied().fold(T::infinity(), T::min)
    }

    /// Nodal positivity and finiteness.
    pub fn check_positive(&self) -> Result<(), DiscretizationError> {
        let bad = |v: &[T]| v.iter().position(|x| !(*x > T::zero()) || !x.is_finite());
        if let Some(i) = bad(&self.rho) {
            return Err(DiscretizationError::State(format!("density {} at node {i}", self.rho[i])));
        }
        if let Some(i) = bad(&self.theta) {
            return Err(DiscretizationError::State(format!("temperature {} at node {i}", self.theta[i])));
        }
        Ok(())
    }

    /// Wall trace consistency: `theta = theta_B` and `u = u_B` at both walls.
    pub fn boundary_mismatch(&self, bd: &BoundaryData<T>) -> T {
        let n = self.rho.len() - 1;
        let mut m = T::zero();
        for (side, i) in [(Side::Left, 0), (Side::Right, n)] {
            m = m.max((self.theta[i] - bd.theta_b(side, self.t)).abs());
            m = m.max((self.u[i] - bd.u_b(side, self.t)).abs());
        }
        m
    }
}
