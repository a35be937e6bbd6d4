use crate::diagnostics::{DiagnosticsError, Derivatives, TemperatureExtension};
use crate::discretization::{BoundaryData, FieldState, Grid1D, Side};
use crate::real::Real;
use crate::scheme::Scheme;
use crate::thermo::EquationOfState;

/// Which form of the balances is evaluated.
///
/// `Regularized` carries every `eps` and `delta` term of the approximate
/// system and is what scheme trajectories satisfy up to discretization error.
/// `Physical` drops them and uses the inflow density data on inflow walls.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BalanceVariant {
    #[default]
    Regularized,
    Physical,
}

/// Energy content of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown<T> {
    /// `∫ 1/2 rho |u - u_B|^2`
    pub kinetic: T,
    /// `∫ rho e` without the radiation part
    pub internal: T,
    /// `∫ a theta^4`
    pub radiation: T,
    /// `∫ rho s`
    pub total_entropy: T,
}

pub fn energy_breakdown<T: Real>(
    state: &FieldState<T>,
    grid: &Grid1D<T>,
    bd: &BoundaryData<T>,
    eos: &EquationOfState<T>,
) -> EnergyBreakdown<T> {
    let half = T::lit(0.5);
    let ub = bd.u_ext_nodes(state.t, grid);
    let (mut kin, mut int, mut rad, mut ent) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for i in 0..grid.n_nodes() {
        let (r, th) = (state.rho[i], state.theta[i]);
        let v = state.u[i] - ub[i];
        let a = eos.radiation * th.powi(4);
        kin.push(half * r * v * v);
        int.push(eos.energy_density(r, th) - a);
        rad.push(a);
        ent.push(r * eos.entropy_unchecked(r, th));
    }
    EnergyBreakdown {
        kinetic: grid.integrate(&kin),
        internal: grid.integrate(&int),
        radiation: grid.integrate(&rad),
        total_entropy: grid.integrate(&ent),
    }
}

/// `∫ (1/2 rho |u - u_B|^2 + rho e - theta~ rho s)` for nodal `theta_tilde`.
pub fn ballistic_energy<T: Real>(
    state: &FieldState<T>,
    theta_tilde: &[T],
    grid: &Grid1D<T>,
    bd: &BoundaryData<T>,
    eos: &EquationOfState<T>,
) -> T {
    let half = T::lit(0.5);
    let ub = bd.u_ext_nodes(state.t, grid);
    let f: Vec<T> = (0..grid.n_nodes())
        .map(|i| {
            let (r, th) = (state.rho[i], state.theta[i]);
            let v = state.u[i] - ub[i];
            half * r * v * v + eos.energy_density(r, th) - theta_tilde[i] * r * eos.entropy_unchecked(r, th)
        })
        .collect();
    grid.integrate(&f)
}

/// Terms of a balance over a time window; `defect = change + boundary +
/// heat_flux + dissipation - sources`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BalanceTerms<T> {
    /// stored functional at the end minus at the start
    pub change: T,
    /// convective and inflow-closure wall fluxes
    pub boundary: T,
    /// wall heat flux `∫ q . n`, total energy only
    pub heat_flux: T,
    /// `∫ (theta~/theta)(S:Du - q . grad theta / theta)`, ballistic only
    pub dissipation: T,
    /// work, transport and regularization sources
    pub sources: T,
    pub defect: T,
}

/// Integrands of both balances at one sample.
struct Rates<T> {
    total_energy: T,
    ballistic_energy: T,
    total_boundary: T,
    ballistic_boundary: T,
    heat_flux: T,
    dissipation: T,
    total_sources: T,
    ballistic_sources: T,
}

fn rates<T: Real>(
    scheme: &Scheme<T>,
    state: &FieldState<T>,
    ext: &dyn TemperatureExtension<T>,
    variant: BalanceVariant,
) -> Result<Rates<T>, DiagnosticsError> {
    let grid = &scheme.grid;
    let bd = &scheme.bd;
    let eos = &scheme.model.eos;
    let t = state.t;
    let n = grid.n_nodes();
    let (zero, one, two, half) = (T::zero(), T::one(), T::lit(2.0), T::lit(0.5));
    let regularized = variant == BalanceVariant::Regularized;
    let (eps, delta) = if regularized { (scheme.params.eps, scheme.params.delta) } else { (zero, zero) };
    let gamma = scheme.params.gamma;

    let tt = ext.check(t, grid, bd)?;
    let tt_x = ext.gradient(t, grid);
    let tt_t = ext.time_derivative(t, grid);
    let d = Derivatives::of(scheme, state);
    let ub = bd.u_ext_nodes(t, grid);
    let ub_x = bd.u_ext_x(t);
    let ub_t = grid.sample(|x| bd.u_ext_t(t, x));

    // H(rho) = delta (rho^Gamma/(Gamma-1) + rho^2) and its derivatives
    let h_pot = |r: T| delta * (r.powf(gamma) / (gamma - one) + r * r);
    let h_d1 = |r: T| delta * (gamma * r.powf(gamma - one) / (gamma - one) + two * r);
    let h_d2 = |r: T| delta * (gamma * r.powf(gamma - two) + two);
    let conductivity = |th: T| delta * (th.powf(gamma) + one / th) + scheme.model.transport.kappa(th);
    let nu = |th: T| scheme.model.slab_viscosity(th, delta * th);

    let mut e_tot = vec![zero; n];
    let mut e_bal = vec![zero; n];
    let mut diss = vec![zero; n];
    let mut src_tot = vec![zero; n];
    let mut src_bal = vec![zero; n];
    for i in 0..n {
        let x = grid.x()[i];
        let (r, th, u) = (state.rho[i], state.theta[i], state.u[i]);
        let (ux, tx, rx, rxx) = (d.u_x[i], d.theta_x[i], d.rho_x[i], d.rho_xx[i]);
        let pa = eos.partials(r, th);
        let v = u - ub[i];
        let s_d = pa.s + delta * th.ln();
        let p_d = delta * (r.powf(gamma) + r * r);
        let k = conductivity(th);
        let nu_i = nu(th);
        let ratio = tt[i] / th;
        let g = scheme.forcing.body_force(t, x);

        let stored = half * r * v * v + r * (pa.e + delta * th) + h_pot(r);
        e_tot[i] = stored;
        e_bal[i] = stored - tt[i] * r * s_d;
        diss[i] = ratio * (nu_i * ux * ux + k * tx * tx / th);

        let work = -(r * u * u + pa.p + p_d - nu_i * ux) * ub_x
            + half * r * u * two * ub[i] * ub_x
            + r * v * (g - ub_t[i]);
        let diffusion = eps * rx * (u * ux - ub[i] * ub_x);
        let barrier = delta / (th * th) - eps * th.powi(5);
        src_tot[i] = work + diffusion + barrier;

        let gibbs = pa.e + delta * th + pa.p / r - th * s_d;
        src_bal[i] = work + diffusion - r * s_d * (tt_t[i] + u * tt_x[i]) + k * tx * tt_x[i] / th
            + (one - ratio) * barrier
            - eps * ratio * h_d2(r) * rx * rx
            + eps * ratio * rxx * gibbs;
    }

    let sigma = scheme.inflow_weights(t);
    let mut total_boundary = zero;
    let mut ballistic_boundary = zero;
    let mut heat_flux = zero;
    for side in Side::BOTH {
        let i = if side == Side::Left { 0 } else { n - 1 };
        let nrm: T = side.normal();
        let un = bd.normal_velocity(side, t);
        let (rb, thb) = (bd.rho_b(side, t), bd.theta_b(side, t));
        let th = state.theta[i];
        heat_flux += -conductivity(th) * d.theta_x[i] * nrm;
        match variant {
            BalanceVariant::Regularized => {
                let r = state.rho[i];
                let pa = eos.partials(r, thb);
                let internal = r * (pa.e + delta * thb) + h_pot(r);
                let closure = h_d1(r) * (r - rb) * sigma[side.index()];
                total_boundary += internal * un - closure;
                ballistic_boundary += (internal - thb * r * (pa.s + delta * thb.ln())) * un - closure;
            }
            BalanceVariant::Physical => {
                let r = if un < zero { rb } else { state.rho[i] };
                total_boundary += eos.energy_density(r, thb) * un;
                ballistic_boundary += (eos.energy_density(r, thb) - thb * r * eos.entropy_unchecked(r, thb)) * un;
            }
        }
    }

    Ok(Rates {
        total_energy: grid.integrate(&e_tot),
        ballistic_energy: grid.integrate(&e_bal),
        total_boundary,
        ballistic_boundary,
        heat_flux,
        dissipation: grid.integrate(&diss),
        total_sources: grid.integrate(&src_tot),
        ballistic_sources: grid.integrate(&src_bal),
    })
}

fn window_rates<T: Real>(
    scheme: &Scheme<T>,
    window: &[FieldState<T>],
    ext: &dyn TemperatureExtension<T>,
    variant: BalanceVariant,
) -> Result<Vec<Rates<T>>, DiagnosticsError> {
    if window.len() < 2 {
        return Err(DiagnosticsError::ShortWindow(window.len()));
    }
    if scheme.forcing.has_auxiliary_sources() {
        return Err(DiagnosticsError::Unsupported(
            "energy balances are evaluated for runs driven by the body force only".into(),
        ));
    }
    window.iter().map(|s| rates(scheme, s, ext, variant)).collect()
}

fn trapezoid<T: Real>(window: &[FieldState<T>], f: impl Fn(usize) -> T) -> T {
    let half = T::lit(0.5);
    (1..window.len()).map(|k| half * (window[k].t - window[k - 1].t) * (f(k) + f(k - 1))).sum()
}

/// Total energy balance over the window: stored energy change plus wall
/// fluxes (heat flux included) minus work and sources.
pub fn total_energy_residual<T: Real>(
    scheme: &Scheme<T>,
    window: &[FieldState<T>],
    ext: &dyn TemperatureExtension<T>,
    variant: BalanceVariant,
) -> Result<BalanceTerms<T>, DiagnosticsError> {
    let r = window_rates(scheme, window, ext, variant)?;
    let last = r.len() - 1;
    let change = r[last].total_energy - r[0].total_energy;
    let boundary = trapezoid(window, |k| r[k].total_boundary);
    let heat_flux = trapezoid(window, |k| r[k].heat_flux);
    let sources = trapezoid(window, |k| r[k].total_sources);
    Ok(BalanceTerms {
        change,
        boundary,
        heat_flux,
        dissipation: T::zero(),
        sources,
        defect: change + boundary + heat_flux - sources,
    })
}

/// Ballistic energy balance over the window with the extension `ext`.
/// A weak solution has `defect <= 0`.
pub fn ballistic_residual<T: Real>(
    scheme: &Scheme<T>,
    window: &[FieldState<T>],
    ext: &dyn TemperatureExtension<T>,
    variant: BalanceVariant,
) -> Result<BalanceTerms<T>, DiagnosticsError> {
    let r = window_rates(scheme, window, ext, variant)?;
    let last = r.len() - 1;
    let change = r[last].ballistic_energy - r[0].ballistic_energy;
    let boundary = trapezoid(window, |k| r[k].ballistic_boundary);
    let dissipation = trapezoid(window, |k| r[k].dissipation);
    let sources = trapezoid(window, |k| r[k].ballistic_sources);
    Ok(BalanceTerms {
        change,
        boundary,
        heat_flux: T::zero(),
        dissipation,
        sources,
        defect: change + boundary + dissipation - sources,
    })
}
