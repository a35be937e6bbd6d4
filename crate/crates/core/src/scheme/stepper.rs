use std::fmt::Debug;
use std::sync::Arc;

use crate::discretization::{build_basis, BoundaryData, FieldState, GalerkinBasis, Grid1D};
use crate::real::Real;
use crate::scheme::{RunMode, SchemeError, SchemeParams};
use crate::thermo::Model;

/// External forcing. Only `body_force` exists in physical runs; the mass and
/// energy sources are for manufactured solutions.
pub trait Forcing<T: Real>: Send + Sync + Debug {
    fn body_force(&self, t: T, x: T) -> T;

    fn mass_source(&self, _t: T, _x: T) -> T {
        T::zero()
    }

    fn energy_source(&self, _t: T, _x: T) -> T {
        T::zero()
    }

    /// True when mass or energy sources are present.
    fn has_auxiliary_sources(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NoForcing;

impl<T: Real> Forcing<T> for NoForcing {
    fn body_force(&self, _t: T, _x: T) -> T {
        T::zero()
    }
}

/// Uniform body force `g`.
#[derive(Debug, Clone, Copy)]
pub struct ConstantForce<T>(pub T);

impl<T: Real> Forcing<T> for ConstantForce<T> {
    fn body_force(&self, _t: T, _x: T) -> T {
        self.0
    }
}

/// Solver telemetry of one accepted step.
#[derive(Debug, Clone, PartialEq)]
pub struct StepReport<T> {
    pub t: T,
    pub dt: T,
    pub halvings: u32,
    pub boundary_flux: [T; 2],
    pub mass_defect: T,
    pub peclet: T,
    pub momentum_iterations: usize,
    pub momentum_residual: T,
    pub energy_iterations: usize,
    pub energy_residual: T,
    pub inversion_gap: T,
    pub min_rho: T,
    pub min_theta: T,
}

/// Sampled states with the reports of every accepted step.
#[derive(Debug, Clone, Default)]
pub struct Trajectory<T> {
    pub states: Vec<FieldState<T>>,
    pub reports: Vec<StepReport<T>>,
}

/// A fully specified discrete problem.
#[derive(Debug, Clone)]
pub struct Scheme<T: Real> {
    pub grid: Grid1D<T>,
    pub basis: GalerkinBasis<T>,
    pub bd: BoundaryData<T>,
    pub model: Model<T>,
    pub params: SchemeParams<T>,
    pub forcing: Arc<dyn Forcing<T>>,
}

impl<T: Real> Scheme<T> {
    pub fn new(
        grid: Grid1D<T>,
        bd: BoundaryData<T>,
        model: Model<T>,
        params: SchemeParams<T>,
        forcing: Arc<dyn Forcing<T>>,
    ) -> Result<Self, SchemeError> {
        params.validate()?;
        if params.mode == RunMode::Physical && forcing.has_auxiliary_sources() {
            return Err(SchemeError::Params(
                "manufactured mass/energy sources are only accepted in verification mode".into(),
            ));
        }
        if (grid.length() - bd.length).abs() > T::epsilon() * T::lit(16.0) * grid.length() {
            return Err(SchemeError::Params("grid and boundary data disagree on the slab length".into()));
        }
        bd.validate(params.t_end, 64)?;
        let basis = build_basis(&grid, params.n_modes)?;
        Ok(Self { grid, basis, bd, model, params, forcing })
    }

    /// State with the given nodal density and temperature and velocity
    /// `u_B + P_n (u0 - u_B)`; the wall temperatures are overwritten by `theta_B`.
    pub fn initial_state(&self, rho: Vec<T>, mut theta: Vec<T>, u0: &[T]) -> Result<FieldState<T>, SchemeError> {
        let n = self.grid.n_nodes();
        let t0 = T::zero();
        if theta.len() == n {
            theta[0] = self.bd.theta_b(crate::discretization::Side::Left, t0);
            theta[n - 1] = self.bd.theta_b(crate::discretization::Side::Right, t0);
        }
        let ub = self.bd.u_ext_nodes(t0, &self.grid);
        let v: Vec<T> = u0.iter().zip(&ub).map(|(a, b)| *a - *b).collect();
        let coeffs = self.basis.project(&self.grid, &v)?;
        let s = FieldState::new(t0, rho, theta, coeffs, &self.grid, &self.basis, &self.bd)?;
        s.check_positive()?;
        Ok(s)
    }

    /// One Lie-split step of size `dt`, without retries.
    pub fn try_step(&self, state: &FieldState<T>, dt: T) -> Result<(FieldState<T>, StepReport<T>), SchemeError> {
        let t_new = state.t + dt;
        let ub_new = self.bd.u_ext_nodes(t_new, &self.grid);
        let v_old = self.basis.reconstruct(&state.v_coeffs);
        let advect: Vec<T> = v_old.iter().zip(&ub_new).map(|(a, b)| *a + *b).collect();
        let cont = self.step_continuity(state, &advect, dt)?;
        let mom = self.step_momentum(state, &cont.rho, dt)?;
        let slope = self.bd.u_ext_x(t_new);
        let ux: Vec<T> = self
            .basis
            .reconstruct_derivative(&mom.v_coeffs)
            .into_iter()
            .map(|d| d + slope)
            .collect();
        let en = self.step_energy(state, &cont.rho, &mom.u, &ux, dt)?;
        let next = FieldState { t: t_new, rho: cont.rho, theta: en.theta, v_coeffs: mom.v_coeffs, u: mom.u };
        next.check_positive()?;
        let report = StepReport {
            t: t_new,
            dt,
            halvings: 0,
            boundary_flux: cont.boundary_flux,
            mass_defect: cont.mass_defect,
            peclet: cont.peclet,
            momentum_iterations: mom.iterations,
            momentum_residual: mom.residual,
            energy_iterations: en.iterations,
            energy_residual: en.residual,
            inversion_gap: en.inversion_gap,
            min_rho: next.min_rho(),
            min_theta: next.min_theta(),
        };
        Ok((next, report))
    }

    /// Continuity, momentum, energy in sequence. A rejected step is retried
    /// with half the step, at most `max_halvings` times; the accepted step
    /// size is in the report.
    pub fn advance(&self, state: &FieldState<T>, dt: T) -> Result<(FieldState<T>, StepReport<T>), SchemeError> {
        let mut trial = dt;
        let mut last_err = None;
        for halvings in 0..=self.params.max_halvings {
            match self.try_step(state, trial) {
                Ok((s, mut r)) => {
                    r.halvings = halvings;
                    return Ok((s, r));
                }
                Err(e @ (SchemeError::Rejected { .. } | SchemeError::Linalg(_) | SchemeError::Thermo(_)
                | SchemeError::Discretization(_))) => {
                    last_err = Some(e);
                    trial = trial * T::lit(0.5);
                }
                Err(e) => return Err(e),
            }
        }
        Err(SchemeError::Aborted {
            t: state.t.as_f64(),
            reason: format!(
                "step rejected after {} halvings: {}",
                self.params.max_halvings,
                last_err.map(|e| e.to_string()).unwrap_or_default()
            ),
        })
    }

    /// Advances to `t_end`. `probe` sees the initial state and then every
    /// `stride`-th accepted state; sampled states are kept in the trajectory.
    pub fn run<F>(&self, initial: FieldState<T>, stride: usize, mut probe: F) -> Result<Trajectory<T>, SchemeError>
    where
        F: FnMut(&FieldState<T>, Option<&StepReport<T>>) -> Result<(), SchemeError>,
    {
        let stride = stride.max(1);
        let mut traj = Trajectory { states: vec![initial.clone()], reports: Vec::new() };
        probe(&initial, None)?;
        let mut state = initial;
        let t_end = self.params.t_end;
        let tiny = self.params.dt * T::lit(1e-9);
        let mut k = 0usize;
        while state.t < t_end - tiny {
            let dt = self.params.dt.min(t_end - state.t);
            let (next, report) = self.advance(&state, dt)?;
            k += 1;
            state = next;
            let last = state.t >= t_end - tiny;
            if k % stride == 0 || last {
                probe(&state, Some(&report))?;
                traj.states.push(state.clone());
            }
            traj.reports.push(report);
        }
        Ok(traj)
    }
}
