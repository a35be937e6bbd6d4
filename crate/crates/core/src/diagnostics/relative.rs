use crate::diagnostics::{DiagnosticsError, Derivatives, StrongReference};
use crate::discretization::{FieldState, Grid1D, Side};
use crate::real::Real;
use crate::scheme::Scheme;
use crate::thermo::{EquationOfState, Model};

/// Nodal relative energy
/// `1/2 rho (u - u~)^2 + rho ((e - e~) - theta~ (s - s~)) + p~ (1 - rho/rho~)`.
///
/// Algebraically equal to the expanded form; written with differences so it
/// vanishes exactly at the reference.
#[allow(clippy::too_many_arguments)]
pub fn relative_energy_density<T: Real>(
    rho: T,
    theta: T,
    u: T,
    ref_rho: T,
    ref_theta: T,
    ref_u: T,
    eos: &EquationOfState<T>,
) -> T {
    let du = u - ref_u;
    let de = eos.internal_energy_unchecked(rho, theta) - eos.internal_energy_unchecked(ref_rho, ref_theta);
    let ds = eos.entropy_unchecked(rho, theta) - eos.entropy_unchecked(ref_rho, ref_theta);
    let pr = eos.pressure_unchecked(ref_rho, ref_theta);
    T::lit(0.5) * rho * du * du + rho * (de - ref_theta * ds) + pr * (ref_rho - rho) / ref_rho
}

/// `∫ E(rho, theta, u | rho~, theta~, u~)`.
pub fn relative_energy_field<T: Real>(
    state: &FieldState<T>,
    reference: &StrongReference<T>,
    grid: &Grid1D<T>,
    eos: &EquationOfState<T>,
) -> T {
    let f: Vec<T> = (0..grid.n_nodes())
        .map(|i| {
            relative_energy_density(
                state.rho[i],
                state.theta[i],
                state.u[i],
                reference.rho[i],
                reference.theta[i],
                reference.u[i],
                eos,
            )
        })
        .collect();
    grid.integrate(&f)
}

/// Integrals of the three successive quadratic error densities.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct QuadraticErrors<T> {
    pub r1: T,
    pub r2: T,
    pub r3: T,
}

/// Quadratic error densities at every node, `(R1, R2, R3)`.
pub(crate) fn quadratic_error_densities<T: Real>(
    state: &FieldState<T>,
    reference: &StrongReference<T>,
    model: &Model<T>,
) -> (Vec<T>, Vec<T>, Vec<T>) {
    let eos = &model.eos;
    let one = T::one();
    let n = state.rho.len();
    let (mut r1, mut r2, mut r3) = (vec![T::zero(); n], vec![T::zero(); n], vec![T::zero(); n]);
    for i in 0..n {
        let (r, th, u) = (state.rho[i], state.theta[i], state.u[i]);
        let (rr, tr, ur) = (reference.rho[i], reference.theta[i], reference.u[i]);
        let (ur_x, ur_xx, tr_x) = (reference.u_x[i], reference.u_xx[i], reference.theta_x[i]);
        let pr = eos.partials(rr, tr);
        let p = eos.pressure_unchecked(r, th);
        let s = eos.entropy_unchecked(r, th);
        let ds = s - pr.s;
        let pr_x = pr.p_rho * reference.rho_x[i] + pr.p_theta * tr_x;
        let stress_x = model.slab_viscosity_derivative(tr, T::zero()) * tr_x * ur_x
            + model.slab_viscosity(tr, T::zero()) * ur_xx;
        let material = reference.theta_t[i] + ur * tr_x;
        let ratio = r / rr - one;

        let a = r * (ur - u) * (u - ur) * ur_x
            + ratio * stress_x * (ur - u)
            + ratio * (u - ur) * pr_x
            + r * ds * (ur - u) * tr_x
            - (r - rr) * ds * material;
        let b = a + (one - r / rr) * (u - ur) * pr_x;
        let pressure_defect = pr.p - pr.p_rho * (rr - r) - pr.p_theta * (tr - th) - p;
        let entropy_defect = pr.s - pr.s_rho * (rr - r) - pr.s_theta * (tr - th) - s;
        let c = b + ur_x * pressure_defect + rr * entropy_defect * material;
        r1[i] = a;
        r2[i] = b;
        r3[i] = c;
    }
    (r1, r2, r3)
}

pub fn quadratic_errors<T: Real>(
    state: &FieldState<T>,
    reference: &StrongReference<T>,
    grid: &Grid1D<T>,
    model: &Model<T>,
) -> QuadraticErrors<T> {
    let (a, b, c) = quadratic_error_densities(state, reference, model);
    QuadraticErrors { r1: grid.integrate(&a), r2: grid.integrate(&b), r3: grid.integrate(&c) }
}

/// Integrand of the relative energy inequality at one sample, without the
/// stored relative energy: outflow wall terms plus the dissipation
/// differences minus `R3`.
fn relative_rate<T: Real>(scheme: &Scheme<T>, state: &FieldState<T>, reference: &StrongReference<T>) -> T {
    let grid = &scheme.grid;
    let bd = &scheme.bd;
    let model = &scheme.model;
    let eos = &model.eos;
    let tr_model = &model.transport;
    let one = T::one();
    let zero = T::zero();
    let d = Derivatives::of(scheme, state);
    let n = grid.n_nodes();

    let mut f = vec![zero; n];
    for i in 0..n {
        let (th, ux, tx) = (state.theta[i], d.u_x[i], d.theta_x[i]);
        let (tt, uu_x, tt_x) = (reference.theta[i], reference.u_x[i], reference.theta_x[i]);
        let nu = model.slab_viscosity(th, zero);
        let nu_r = model.slab_viscosity(tt, zero);
        let (k, k_r) = (tr_model.kappa(th), tr_model.kappa(tt));
        f[i] = (tt / th - one) * nu * ux * ux + (th / tt - one) * nu_r * uu_x * uu_x
            - (one - tt / th) * k * tx * tx / th
            - (one - th / tt) * k_r * tt_x * tt_x / tt
            + (-k * tx / th + k_r * tt_x / tt) * (tt_x - tx)
            + (nu_r * uu_x - nu * ux) * (uu_x - ux);
    }
    let (_, _, r3) = quadratic_error_densities(state, reference, model);
    let interior = grid.integrate(&f) - grid.integrate(&r3);

    let mut wall = zero;
    for side in Side::BOTH {
        let un = bd.normal_velocity(side, state.t);
        if un > zero {
            let i = if side == Side::Left { 0 } else { n - 1 };
            let thb = bd.theta_b(side, state.t);
            let (r, rr) = (state.rho[i], reference.rho[i]);
            let pr = eos.pressure_unchecked(rr, thb);
            let gibbs_r = eos.internal_energy_unchecked(rr, thb) - thb * eos.entropy_unchecked(rr, thb) + pr / rr;
            wall += (eos.energy_density(r, thb) - thb * r * eos.entropy_unchecked(r, thb) - gibbs_r * r + pr) * un;
        }
    }
    interior + wall
}

/// Relative energy inequality over the window: change of the relative energy
/// plus the time integral of [`relative_rate`]. Non-positive for a weak
/// solution and a strong reference.
pub fn relative_energy_residual<T: Real>(
    scheme: &Scheme<T>,
    window: &[FieldState<T>],
    references: &[StrongReference<T>],
) -> Result<T, DiagnosticsError> {
    if window.len() < 2 {
        return Err(DiagnosticsError::ShortWindow(window.len()));
    }
    check_alignment(window, references)?;
    let eos = &scheme.model.eos;
    let last = window.len() - 1;
    let change = relative_energy_field(&window[last], &references[last], &scheme.grid, eos)
        - relative_energy_field(&window[0], &references[0], &scheme.grid, eos);
    let rates: Vec<T> = window.iter().zip(references).map(|(s, r)| relative_rate(scheme, s, r)).collect();
    let half = T::lit(0.5);
    let integral: T = (1..window.len())
        .map(|k| half * (window[k].t - window[k - 1].t) * (rates[k] + rates[k - 1]))
        .sum();
    Ok(change + integral)
}

fn check_alignment<T: Real>(states: &[FieldState<T>], references: &[StrongReference<T>]) -> Result<(), DiagnosticsError> {
    if states.len() != references.len() {
        return Err(DiagnosticsError::Reference(format!(
            "{} states but {} references",
            states.len(),
            references.len()
        )));
    }
    for (s, r) in states.iter().zip(references) {
        if (s.t - r.t).abs() > T::rel_tol(1e-12) * s.t.abs().max(T::one()) {
            return Err(DiagnosticsError::Reference(format!("state at t = {} paired with reference at t = {}", s.t, r.t)));
        }
    }
    Ok(())
}

/// Fitted constants of `E(t) <= (E(0) + c1 t) exp(c2 t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GronwallFit {
    pub e0: f64,
    pub c1: f64,
    pub c2: f64,
    /// largest `E(t) / bound(t)` over the samples
    pub max_ratio: f64,
    pub holds: bool,
}

impl GronwallFit {
    pub fn bound(&self, t: f64) -> f64 {
        (self.e0 + self.c1 * t) * (self.c2 * t).exp()
    }
}

/// Smallest bound at the final time over a logarithmic scan of `c2`, with
/// `c1` the least value compatible with every sample for that `c2`.
pub fn fit_gronwall(t: &[f64], e: &[f64]) -> GronwallFit {
    let e0 = e.first().copied().unwrap_or(0.0);
    let t0 = t.first().copied().unwrap_or(0.0);
    let t_end = t.last().copied().unwrap_or(0.0) - t0;
    let c1_for = |c2: f64| {
        t.iter()
            .zip(e)
            .skip(1)
            .filter(|(tk, _)| **tk > t0)
            .map(|(tk, ek)| (ek * (-c2 * (tk - t0)).exp() - e0) / (tk - t0))
            .fold(0.0f64, f64::max)
    };
    let candidates = std::iter::once(0.0).chain((0..=60).map(|j| 10f64.powf(-3.0 + 0.1 * j as f64)));
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for c2 in candidates {
        let c1 = c1_for(c2);
        let b = (e0 + c1 * t_end) * (c2 * t_end).exp();
        if b < best.0 {
            best = (b, c1, c2);
        }
    }
    let mut fit = GronwallFit { e0, c1: best.1, c2: best.2, max_ratio: 0.0, holds: true };
    for (tk, ek) in t.iter().zip(e) {
        let b = fit.bound(tk - t0);
        let ratio = if b > 0.0 { ek / b } else if *ek > 0.0 { f64::INFINITY } else { 0.0 };
        fit.max_ratio = fit.max_ratio.max(ratio);
    }
    fit.holds = fit.max_ratio <= 1.0 + 1e-9;
    fit
}

/// Relative energy history against a reference path.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakStrongSeries {
    pub t: Vec<f64>,
    pub relative_energy: Vec<f64>,
    /// `∫_0^t ∫ R3`
    pub r3_accumulated: Vec<f64>,
    pub fit: GronwallFit,
}

impl WeakStrongSeries {
    pub fn final_energy(&self) -> f64 {
        self.relative_energy.last().copied().unwrap_or(0.0)
    }
}

pub fn weak_strong_monitor<T: Real>(
    states: &[FieldState<T>],
    references: &[StrongReference<T>],
    grid: &Grid1D<T>,
    model: &Model<T>,
) -> Result<WeakStrongSeries, DiagnosticsError> {
    check_alignment(states, references)?;
    let mut t = Vec::with_capacity(states.len());
    let mut e = Vec::with_capacity(states.len());
    let mut acc = Vec::with_capacity(states.len());
    let mut prev_r3 = 0.0;
    let mut total = 0.0;
    for (k, (s, r)) in states.iter().zip(references).enumerate() {
        let value = relative_energy_field(s, r, grid, &model.eos).as_f64();
        let r3 = quadratic_errors(s, r, grid, model).r3.as_f64();
        if k > 0 {
            total += 0.5 * (s.t.as_f64() - t[k - 1]) * (r3 + prev_r3);
        }
        prev_r3 = r3;
        t.push(s.t.as_f64());
        e.push(value);
        acc.push(total);
    }
    let fit = fit_gronwall(&t, &e);
    Ok(WeakStrongSeries { t, relative_energy: e, r3_accumulated: acc, fit })
}
