use crate::diagnostics::{harmonic_extension, Derivatives};
use crate::discretization::{FieldState, Grid1D};
use crate::real::Real;
use crate::scheme::Scheme;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriSettings {
    /// truncation level `K` of the sixth-moment interpolation chain
    pub truncation: f64,
    /// constant of the entropy bound; fitted on the state when `None`
    pub entropy_constant: Option<f64>,
}

impl Default for AprioriSettings {
    fn default() -> Self {
        Self { truncation: 2.0, entropy_constant: None }
    }
}

/// Components of the a priori estimates at one state. Every `*_margin` is
/// non-negative when the corresponding inequality holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AprioriComponents {
    pub korn_poincare: f64,
    /// `∫ (theta~/theta) S:Du`
    pub dissipation: f64,
    /// `inf theta~ c (||u||^2_{W12} - c(u_B))`
    pub coercivity: f64,
    pub dissipation_margin: f64,
    /// `∫ kappa |theta_x|^2 / theta^2`
    pub conduction: f64,
    /// `kappa_lo ∫ (1/theta^2 + theta^(beta-2)) |theta_x|^2`
    pub conduction_floor: f64,
    pub conduction_margin: f64,
    /// `||theta^3||^2_{L2}`
    pub sixth_moment: f64,
    /// `|Omega| K^6 + K^(6-beta) ∫ theta^beta`
    pub sixth_moment_bound: f64,
    pub chain_margin: f64,
    pub entropy_constant: f64,
    /// max over nodes of `C (rho + rho|ln rho| + rho [ln theta]^+) - rho |S(Z)|`
    pub entropy_margin: f64,
    pub theta_tilde_min: f64,
    pub theta_tilde_max: f64,
}

/// `1 / lambda_min` of the Dirichlet Laplacian on the grid,
/// `lambda_min = 4 sin^2(pi / (2N)) / h^2`. It dominates `(L/pi)^2`, so
/// `∫ v^2 <= C ∫ v_x^2` holds for every velocity perturbation in the span.
pub fn korn_poincare_constant<T: Real>(grid: &Grid1D<T>) -> f64 {
    let h = grid.h().as_f64();
    let s = (std::f64::consts::PI / (2.0 * grid.n_cells() as f64)).sin();
    h * h / (4.0 * s * s)
}

pub fn apriori_components<T: Real>(
    scheme: &Scheme<T>,
    state: &FieldState<T>,
    settings: &AprioriSettings,
) -> AprioriComponents {
    let grid = &scheme.grid;
    let bd = &scheme.bd;
    let model = &scheme.model;
    let tr = &model.transport;
    let n = grid.n_nodes();
    let d = Derivatives::of(scheme, state);
    let tt = harmonic_extension(bd, state.t, grid);
    let f = |v: &[f64]| grid.integrate(&v.iter().map(|x| T::lit(*x)).collect::<Vec<_>>()).as_f64();

    let theta: Vec<f64> = state.theta.iter().map(|x| x.as_f64()).collect();
    let rho: Vec<f64> = state.rho.iter().map(|x| x.as_f64()).collect();
    let u: Vec<f64> = state.u.iter().map(|x| x.as_f64()).collect();
    let ux: Vec<f64> = d.u_x.iter().map(|x| x.as_f64()).collect();
    let tx: Vec<f64> = d.theta_x.iter().map(|x| x.as_f64()).collect();
    let tt: Vec<f64> = tt.iter().map(|x| x.as_f64()).collect();

    let cp = korn_poincare_constant(grid);
    let d_eff = model.d_eff.as_f64();
    let m0 = 2.0 * tr.mu_lo.as_f64() * (1.0 - 1.0 / d_eff);
    let c = m0 / (1.0 + 4.0 * cp);
    let diss: Vec<f64> = (0..n)
        .map(|i| {
            let nu = model.slab_viscosity(state.theta[i], T::zero()).as_f64();
            tt[i] / theta[i] * nu * ux[i] * ux[i]
        })
        .collect();
    let dissipation = f(&diss);
    let norm = f(&u.iter().map(|v| v * v).collect::<Vec<_>>()) + f(&ux.iter().map(|v| v * v).collect::<Vec<_>>());
    let ub: Vec<f64> = bd.u_ext_nodes(state.t, grid).iter().map(|x| x.as_f64()).collect();
    let ub_x = bd.u_ext_x(state.t).as_f64();
    let c_ub = 4.0 * cp * ub_x * ub_x * grid.length().as_f64() + 2.0 * f(&ub.iter().map(|v| v * v).collect::<Vec<_>>());
    let tt_min = tt.iter().copied().fold(f64::INFINITY, f64::min);
    let tt_max = tt.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let coercivity = tt_min * c * (norm - c_ub);

    let beta = tr.beta.as_f64();
    let kappa_lo = tr.kappa_lo.as_f64();
    let cond: Vec<f64> =
        (0..n).map(|i| tr.kappa(state.theta[i]).as_f64() * tx[i] * tx[i] / (theta[i] * theta[i])).collect();
    let floor: Vec<f64> = (0..n)
        .map(|i| kappa_lo * (1.0 / (theta[i] * theta[i]) + theta[i].powf(beta - 2.0)) * tx[i] * tx[i])
        .collect();
    let conduction = f(&cond);
    let conduction_floor = f(&floor);

    let k = settings.truncation;
    let sixth_moment = f(&theta.iter().map(|t| t.powi(6)).collect::<Vec<_>>());
    let sixth_moment_bound = grid.length().as_f64() * k.powi(6)
        + k.powf(6.0 - beta) * f(&theta.iter().map(|t| t.powf(beta)).collect::<Vec<_>>());

    let eos = &model.eos;
    let pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let z = state.rho[i] / state.theta[i].powf(T::lit(1.5));
            let lhs = rho[i] * eos.structural_entropy(z).as_f64().abs();
            let gauge = rho[i] + rho[i] * rho[i].ln().abs() + rho[i] * theta[i].ln().max(0.0);
            (lhs, gauge)
        })
        .collect();
    let fitted = pairs.iter().map(|(a, g)| a / g).fold(0.0f64, f64::max);
    let entropy_constant = settings.entropy_constant.unwrap_or(fitted);
    let entropy_margin = pairs.iter().map(|(a, g)| entropy_constant * g - a).fold(f64::INFINITY, f64::min);

    AprioriComponents {
        korn_poincare: cp,
        dissipation,
        coercivity,
        dissipation_margin: dissipation - coercivity,
        conduction,
        conduction_floor,
        conduction_margin: conduction - conduction_floor,
        sixth_moment,
        sixth_moment_bound,
        chain_margin: sixth_moment_bound - sixth_moment,
        entropy_constant,
        entropy_margin,
        theta_tilde_min: tt_min,
        theta_tilde_max: tt_max,
    }
}
