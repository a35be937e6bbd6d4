use std::sync::Arc;

use approx::assert_relative_eq;

use super::*;
use crate::discretization::{BoundaryData, Grid1D, SmoothingKind, TimeFunction, Trace};
use crate::thermo::Model;

fn scheme(n: usize, bd: BoundaryData<f64>, params: SchemeParams<f64>, forcing: Arc<dyn Forcing<f64>>) -> Scheme<f64> {
    Scheme::new(Grid1D::new(n, bd.length).unwrap(), bd, Model::default(), params, forcing).unwrap()
}

fn quiet_walls(rho: f64, theta: f64) -> BoundaryData<f64> {
    BoundaryData::constant(1.0, [rho; 2], [theta; 2], [0.0; 2])
}

#[test]
fn uniform_density_is_steady_for_continuity() {
    let p = SchemeParams { dt: 1e-2, ..Default::default() };
    let s = scheme(32, quiet_walls(1.3, 1.0), p, Arc::new(NoForcing));
    let st = s.initial_state(vec![1.3; 33], vec![1.0; 33], &[0.0; 33]).unwrap();
    let out = s.step_continuity(&st, &[0.0; 33], 1e-2).unwrap();
    assert!(out.rho.iter().all(|r| (r - 1.3).abs() < 1e-12));
}

#[test]
fn impermeable_walls_conserve_mass() {
    let p = SchemeParams { smoothing: SmoothingKind::Sharp, eps: 0.05, ..Default::default() };
    let s = scheme(40, quiet_walls(1.0, 1.0), p, Arc::new(NoForcing));
    let rho0 = s.grid.sample(|x| 1.0 + 0.4 * (3.0 * x).sin() + x * x);
    let mut st = s.initial_state(rho0, vec![1.0; 41], &[0.0; 41]).unwrap();
    let m0 = s.grid.integrate(&st.rho);
    for _ in 0..20 {
        let out = s.step_continuity(&st, &[0.0; 41], 1e-2).unwrap();
        let m1 = s.grid.integrate(&out.rho);
        assert!((m1 - m0).abs() < 1e-10 * m0, "{m0} {m1}");
        st.rho = out.rho;
        st.t += 1e-2;
    }
}

#[test]
fn cosine_mode_decays_at_heat_equation_rate() {
    let eps = 0.1;
    let p = SchemeParams { smoothing: SmoothingKind::Sharp, eps, ..Default::default() };
    let s = scheme(128, quiet_walls(1.0, 1.0), p, Arc::new(NoForcing));
    let pi = std::f64::consts::PI;
    let mut st = s.initial_state(s.grid.sample(|x| 1.0 + 0.2 * (pi * x).cos()), vec![1.0; 129], &[0.0; 129]).unwrap();
    let dt = 1e-4;
    let steps = 1000;
    for _ in 0..steps {
        st.rho = s.step_continuity(&st, &[0.0; 129], dt).unwrap().rho;
        st.t += dt;
    }
    let amp = (st.rho[0] - st.rho[128]) / 2.0;
    let exact = 0.2 * (-eps * pi * pi * dt * steps as f64).exp();
    assert!((amp / exact - 1.0).abs() < 0.02, "{amp} vs {exact}");
}

#[test]
fn resting_uniform_state_keeps_zero_velocity() {
    let s = scheme(32, quiet_walls(1.0, 1.0), SchemeParams::default(), Arc::new(NoForcing));
    let st = s.initial_state(vec![1.0; 33], vec![1.0; 33], &[0.0; 33]).unwrap();
    let out = s.step_momentum(&st, &st.rho, 1e-3).unwrap();
    assert!(out.v_coeffs.iter().all(|c| c.abs() < 1e-12));
}

/// Hydrostatic profile `d p_tot / dx = rho g` at uniform temperature, by RK4.
fn hydrostatic(s: &Scheme<f64>, g: f64, theta: f64, rho_left: f64) -> Vec<f64> {
    let dp_drho = |r: f64| {
        let pa = s.model.eos.partials(r, theta);
        pa.p_rho + s.params.delta * (s.params.gamma * r.powf(s.params.gamma - 1.0) + 2.0 * r)
    };
    let f = |r: f64| r * g / dp_drho(r);
    let n = s.grid.n_cells();
    let sub = 8;
    let hh = s.grid.h() / sub as f64;
    let mut out = vec![rho_left];
    let mut r = rho_left;
    for _ in 0..n {
        for _ in 0..sub {
            let k1 = f(r);
            let k2 = f(r + 0.5 * hh * k1);
            let k3 = f(r + 0.5 * hh * k2);
            let k4 = f(r + hh * k3);
            r += hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push(r);
    }
    out
}

#[test]
fn hydrostatic_balance_is_reproduced() {
    let g = -0.5;
    let mut defects = Vec::new();
    for n in [32usize, 64, 128] {
        let s = scheme(n, quiet_walls(1.0, 1.0), SchemeParams::default(), Arc::new(ConstantForce(g)));
        let rho = hydrostatic(&s, g, 1.0, 1.0);
        let st = s.initial_state(rho.clone(), vec![1.0; n + 1], &vec![0.0; n + 1]).unwrap();
        let out = s.step_momentum(&st, &rho, 1e-3).unwrap();
        assert!(out.residual <= 1e-10);
        let w = s.grid.weights();
        let mut worst: f64 = 0.0;
        for j in 0..s.basis.n_modes() {
            let (wj, dj) = (s.basis.values(j), s.basis.derivatives(j));
            let r: f64 = (0..=n).map(|i| w[i] * (s.total_pressure(rho[i], 1.0) * dj[i] + rho[i] * g * wj[i])).sum();
            worst = worst.max(r.abs());
        }
        defects.push(worst);
    }
    // trapezoid consistency: second order in h
    assert!(defects[0] / defects[1] > 3.5 && defects[1] / defects[2] > 3.5, "{defects:?}");
}

#[test]
fn equilibrium_is_a_fixed_point_in_diagnostic_mode() {
    let params = SchemeParams { t_end: 0.1, dt: 1e-3, ..Default::default() }.diagnostic();
    let s = scheme(32, quiet_walls(1.0, 1.5), params, Arc::new(NoForcing));
    let init = s.initial_state(vec![1.0; 33], vec![1.5; 33], &[0.0; 33]).unwrap();
    let traj = s.run(init.clone(), 1, |_, _| Ok(())).unwrap();
    assert_eq!(traj.reports.len(), 100);
    let last = traj.states.last().unwrap();
    for i in 0..33 {
        assert!((last.rho[i] - 1.0).abs() < 1e-12);
        assert!((last.theta[i] - 1.5).abs() < 1e-12);
        assert!(last.u[i].abs() < 1e-12);
    }
}

#[derive(Debug)]
struct Step {
    before: f64,
    after: f64,
    at: f64,
}

impl TimeFunction<f64> for Step {
    fn value(&self, t: f64) -> f64 {
        if t < self.at { self.before } else { self.after }
    }
    fn derivative(&self, _t: f64) -> f64 {
        0.0
    }
}

#[test]
fn barrier_source_acts_alone() {
    let (rho, th0, delta, dt) = (1.2, 0.8, 0.05, 0.1);
    let eos = crate::thermo::EquationOfState::<f64>::default();
    // independent scalar backward Euler: rho (e + delta th) increment = dt delta / th^2
    let target = |th: f64| {
        eos.energy_density(rho, th) + rho * delta * th
            - eos.energy_density(rho, th0)
            - rho * delta * th0
            - dt * delta / (th * th)
    };
    let (mut lo, mut hi) = (th0, 2.0 * th0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if target(mid) > 0.0 { hi = mid } else { lo = mid }
    }
    let th1 = 0.5 * (lo + hi);
    let wall = Trace::Function(Arc::new(Step { before: th0, after: th1, at: 0.5 * dt }));
    let bd = BoundaryData::new(
        1.0,
        [Trace::Constant(rho), Trace::Constant(rho)],
        [wall.clone(), wall],
        [Trace::Constant(0.0), Trace::Constant(0.0)],
    );
    let mut params = SchemeParams { dt, ..Default::default() }.diagnostic();
    params.delta = delta;
    let s = scheme(32, bd, params, Arc::new(NoForcing));
    let st = s.initial_state(vec![rho; 33], vec![th0; 33], &[0.0; 33]).unwrap();
    let out = s.step_energy(&st, &st.rho, &[0.0; 33], &[0.0; 33], dt).unwrap();
    for th in &out.theta {
        assert_relative_eq!(*th, th1, max_relative = 1e-11);
    }
    let (e1, _) = s.regularized_energy(rho, out.theta[16]);
    let (e0, _) = s.regularized_energy(rho, th0);
    assert_relative_eq!((e1 - e0) / dt, delta / (th1 * th1), max_relative = 1e-9);
}

#[test]
fn mass_account_over_an_inflow_run() {
    let bd = BoundaryData::constant(1.0, [1.4, 0.9], [1.0, 1.2], [0.4, 0.2]);
    let params = SchemeParams { eps: 0.05, delta: 1e-3, dt: 2e-3, t_end: 0.1, n_modes: 6, ..Default::default() };
    let s = scheme(48, bd, params, Arc::new(NoForcing));
    let init = s.initial_state(vec![1.0; 49], s.grid.sample(|x| 1.0 + 0.2 * x), &s.grid.sample(|x| 0.4 - 0.2 * x)).unwrap();
    let m0 = s.grid.integrate(&init.rho);
    let traj = s.run(init, 1, |_, _| Ok(())).unwrap();
    let m1 = s.grid.integrate(&traj.states.last().unwrap().rho);
    let inflow: f64 = traj.reports.iter().map(|r| -r.dt * (r.boundary_flux[0] + r.boundary_flux[1])).sum();
    assert!((m1 - m0 - inflow).abs() < 1e-8, "{} vs {}", m1 - m0, inflow);
    for r in &traj.reports {
        assert!(r.mass_defect.abs() < 1e-10 * m0 / r.dt);
        assert!(r.min_rho > 0.0 && r.min_theta > 0.0);
        assert!(r.inversion_gap < 1e-10);
    }
}

#[test]
fn physical_mode_refuses_auxiliary_sources() {
    #[derive(Debug)]
    struct Aux;
    impl Forcing<f64> for Aux {
        fn body_force(&self, _t: f64, _x: f64) -> f64 {
            0.0
        }
        fn has_auxiliary_sources(&self) -> bool {
            true
        }
    }
    let bd = quiet_walls(1.0, 1.0);
    let g = Grid1D::new(32, 1.0).unwrap();
    let e = Scheme::new(g.clone(), bd.clone(), Model::default(), SchemeParams::default(), Arc::new(Aux));
    assert!(matches!(e, Err(SchemeError::Params(_))));
    let p = SchemeParams { mode: RunMode::Verification, ..Default::default() };
    assert!(Scheme::new(g, bd, Model::default(), p, Arc::new(Aux)).is_ok());
}

#[test]
fn regularization_is_required_outside_diagnostic_mode() {
    let p = SchemeParams::<f64> { eps: 0.0, ..Default::default() };
    assert!(p.validate().is_err());
    assert!(SchemeParams::<f64>::default().diagnostic().validate().is_ok());
    assert!(SchemeParams::<f64> { gamma: 1.5, ..Default::default() }.validate().is_err());
}
