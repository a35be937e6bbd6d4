use std::sync::Arc;

use nsf_core::discretization::{BoundaryData, Grid1D};
use nsf_core::scheme::{NoForcing, Scheme, SchemeParams};
use nsf_core::thermo::{EquationOfState, Model};
use nsf_core::Real;
use proptest::prelude::*;

fn build<T: Real>(n: usize, bd: BoundaryData<T>, params: SchemeParams<T>) -> Scheme<T> {
    Scheme::new(Grid1D::new(n, bd.length).unwrap(), bd, Model::default(), params, Arc::new(NoForcing)).unwrap()
}

fn central(f: &dyn Fn(f64) -> f64, x: f64) -> f64 {
    let h = 1e-4 * x;
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // theta ds = de - p / rho^2 drho, split into its two partial derivatives
    #[test]
    fn gibbs_relation_holds(rho in 0.05f64..20.0, theta in 0.1f64..10.0, a in 0.0f64..2.0) {
        let eos = EquationOfState::<f64>::default().with_radiation(a);
        let s_r = central(&|r| eos.entropy_unchecked(r, theta), rho);
        let e_r = central(&|r| eos.internal_energy_unchecked(r, theta), rho);
        let s_t = central(&|t| eos.entropy_unchecked(rho, t), theta);
        let e_t = central(&|t| eos.internal_energy_unchecked(rho, t), theta);
        let p = eos.pressure_unchecked(rho, theta);
        let scale_r = (e_r.abs() + p / (rho * rho)).max(1.0);
        let scale_t = e_t.abs().max(1.0);
        prop_assert!((theta * s_r - e_r + p / (rho * rho)).abs() < 1e-7 * scale_r);
        prop_assert!((theta * s_t - e_t).abs() < 1e-7 * scale_t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn runs_stay_positive_and_account_for_mass(
        rho_b in prop::array::uniform2(0.5f64..2.0),
        theta_b in prop::array::uniform2(0.5f64..2.0),
        u_b in prop::array::uniform2(-0.5f64..0.5),
        bump in -0.4f64..0.4,
    ) {
        let bd = BoundaryData::constant(1.0, rho_b, theta_b, u_b);
        let params = SchemeParams { eps: 0.05, delta: 1e-3, dt: 2e-3, t_end: 0.04, n_modes: 6, ..Default::default() };
        let s = build(32, bd, params);
        let pi = std::f64::consts::PI;
        let rho0 = s.grid.sample(|x| rho_b[0] + (rho_b[1] - rho_b[0]) * x + bump * (pi * x).sin());
        let theta0 = s.grid.sample(|x| theta_b[0] + (theta_b[1] - theta_b[0]) * x);
        let u0 = s.grid.sample(|x| u_b[0] + (u_b[1] - u_b[0]) * x);
        let init = s.initial_state(rho0, theta0, &u0).unwrap();
        let m0 = s.grid.integrate(&init.rho);
        let traj = s.run(init, 1, |_, _| Ok(())).unwrap();
        let last = traj.states.last().unwrap();
        prop_assert!(last.rho.iter().all(|r| *r > 0.0));
        prop_assert!(last.theta.iter().all(|t| *t > 0.0));
        let inflow: f64 = traj.reports.iter().map(|r| -r.dt * (r.boundary_flux[0] + r.boundary_flux[1])).sum();
        let m1 = s.grid.integrate(&last.rho);
        prop_assert!((m1 - m0 - inflow).abs() < 1e-8, "{} vs {}", m1 - m0, inflow);
    }
}

#[test]
fn single_and_double_precision_runs_agree() {
    fn go<T: Real>(tol: f64) -> Vec<f64> {
        let bd = BoundaryData::constant(T::lit(1.0), [T::lit(1.0); 2], [T::lit(1.0), T::lit(1.5)], [T::lit(0.3); 2]);
        let params = SchemeParams {
            eps: T::lit(1e-2),
            delta: T::lit(1e-3),
            dt: T::lit(2e-3),
            t_end: T::lit(0.02),
            n_modes: 6,
            newton_tol: T::lit(tol),
            ..Default::default()
        };
        let s = build(32, bd, params);
        let theta0 = s.grid.sample(|x| T::one() + T::lit(0.5) * x);
        let init = s.initial_state(vec![T::one(); 33], theta0, &[T::lit(0.3); 33]).unwrap();
        let traj = s.run(init, 1, |_, _| Ok(())).unwrap();
        let last = traj.states.last().unwrap();
        last.rho.iter().chain(&last.theta).chain(&last.u).map(|v| v.as_f64()).collect()
    }
    let a = go::<f64>(1e-10);
    let b = go::<f32>(1e-5);
    let gap = a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    assert!(gap < 1e-3, "f32 and f64 differ by {gap}");
}
