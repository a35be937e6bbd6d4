use crate::diagnostics::{
    apriori_components, ballistic_energy, ballistic_residual, energy_breakdown, entropy_production_density,
    quadratic_errors, relative_energy_field, relative_energy_residual, total_energy_residual, AprioriComponents,
    AprioriSettings, BalanceVariant, DiagnosticsError, HarmonicExtension, ReferenceTrio, StrongReference,
    TemperatureExtension,
};
use crate::discretization::FieldState;
use crate::real::Real;
use crate::scheme::Scheme;

pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Column order of the diagnostics table. Residuals cover the interval from
/// the previous row and are NaN on the first row and in runs with
/// manufactured mass or energy sources; reference columns are NaN without a
/// reference.
pub const CSV_COLUMNS: [&str; 27] = [
    "schema_version",
    "t",
    "kinetic",
    "internal",
    "radiation",
    "total_entropy",
    "ballistic_energy",
    "entropy_production",
    "min_entropy_production",
    "heat_flux",
    "total_energy_residual",
    "ballistic_residual",
    "relative_energy",
    "relative_energy_residual",
    "r1",
    "r2",
    "r3",
    "dissipation",
    "dissipation_margin",
    "conduction_margin",
    "chain_margin",
    "entropy_constant",
    "entropy_margin",
    "theta_tilde_min",
    "theta_tilde_max",
    "min_rho",
    "min_theta",
];

/// Diagnostics of one sampled state.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsReport {
    pub t: f64,
    pub kinetic: f64,
    pub internal: f64,
    pub radiation: f64,
    pub total_entropy: f64,
    pub ballistic_energy: f64,
    /// `∫ sigma`
    pub entropy_production: f64,
    pub min_entropy_production: f64,
    /// wall heat flux `∫ q . n` over the last interval (time integral)
    pub heat_flux: f64,
    pub total_energy_residual: f64,
    pub ballistic_residual: f64,
    pub relative_energy: f64,
    pub relative_energy_residual: f64,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub apriori: AprioriComponents,
    pub min_rho: f64,
    pub min_theta: f64,
}

impl DiagnosticsReport {
    pub fn csv_values(&self) -> [f64; 27] {
        let a = &self.apriori;
        [
            CSV_SCHEMA_VERSION as f64,
            self.t,
            self.kinetic,
            self.internal,
            self.radiation,
            self.total_entropy,
            self.ballistic_energy,
            self.entropy_production,
            self.min_entropy_production,
            self.heat_flux,
            self.total_energy_residual,
            self.ballistic_residual,
            self.relative_energy,
            self.relative_energy_residual,
            self.r1,
            self.r2,
            self.r3,
            a.dissipation,
            a.dissipation_margin,
            a.conduction_margin,
            a.chain_margin,
            a.entropy_constant,
            a.entropy_margin,
            a.theta_tilde_min,
            a.theta_tilde_max,
            self.min_rho,
            self.min_theta,
        ]
    }
}

/// Stateful evaluator fed with consecutive samples of one run.
pub struct Evaluator<'a, T: Real> {
    scheme: &'a Scheme<T>,
    pub variant: BalanceVariant,
    pub settings: AprioriSettings,
    reference: Option<&'a dyn ReferenceTrio<T>>,
    previous: Option<(FieldState<T>, Option<StrongReference<T>>)>,
}

impl<'a, T: Real> Evaluator<'a, T> {
    pub fn new(scheme: &'a Scheme<T>) -> Self {
        Self {
            scheme,
            variant: BalanceVariant::Regularized,
            settings: AprioriSettings::default(),
            reference: None,
            previous: None,
        }
    }

    pub fn with_reference(mut self, reference: &'a dyn ReferenceTrio<T>) -> Self {
        self.reference = Some(reference);
        self
    }

    pub fn with_settings(mut self, settings: AprioriSettings) -> Self {
        self.settings = settings;
        self
    }

    /// Evaluates `state` and checks the sign invariants: nodal entropy
    /// production is non-negative and the relative energy is non-negative.
    pub fn observe(&mut self, state: &FieldState<T>) -> Result<DiagnosticsReport, DiagnosticsError> {
        let scheme = self.scheme;
        let grid = &scheme.grid;
        let bd = &scheme.bd;
        let eos = &scheme.model.eos;
        let ext = HarmonicExtension { bd };
        let tt = ext.check(state.t, grid, bd)?;

        let sigma = entropy_production_density(scheme, state);
        if let Some(i) = sigma.iter().position(|s| !(*s >= T::zero())) {
            return Err(DiagnosticsError::Sign(format!(
                "entropy production {} at node {i}, t = {}",
                sigma[i], state.t
            )));
        }
        let energies = energy_breakdown(state, grid, bd, eos);
        let reference = self.reference.map(|r| StrongReference::from_closed_form(r, state.t, grid));
        let nan = f64::NAN;
        let (relative, errors) = match &reference {
            Some(r) => {
                let e = relative_energy_field(state, r, grid, eos);
                let scale = grid.integrate(&state.rho.iter().zip(&state.theta).map(|(a, b)| eos.energy_density(*a, *b)).collect::<Vec<_>>());
                if e < -T::rel_tol(1e-13) * scale {
                    return Err(DiagnosticsError::Sign(format!("relative energy {e} at t = {}", state.t)));
                }
                let q = quadratic_errors(state, r, grid, &scheme.model);
                (e.as_f64(), [q.r1.as_f64(), q.r2.as_f64(), q.r3.as_f64()])
            }
            None => (nan, [nan; 3]),
        };

        let (mut heat, mut total, mut ballistic, mut rel_res) = (nan, nan, nan, nan);
        // the balances do not account for manufactured mass and energy sources
        let balances = !scheme.forcing.has_auxiliary_sources();
        if let (Some((prev, prev_ref)), true) = (&self.previous, balances) {
            let window = [prev.clone(), state.clone()];
            let te = total_energy_residual(scheme, &window, &ext, self.variant)?;
            let be = ballistic_residual(scheme, &window, &ext, self.variant)?;
            heat = te.heat_flux.as_f64();
            total = te.defect.as_f64();
            ballistic = be.defect.as_f64();
            if let (Some(a), Some(b)) = (prev_ref, &reference) {
                rel_res = relative_energy_residual(scheme, &window, &[a.clone(), b.clone()])?.as_f64();
            }
        }

        let report = DiagnosticsReport {
            t: state.t.as_f64(),
            kinetic: energies.kinetic.as_f64(),
            internal: energies.internal.as_f64(),
            radiation: energies.radiation.as_f64(),
            total_entropy: energies.total_entropy.as_f64(),
            ballistic_energy: ballistic_energy(state, &tt, grid, bd, eos).as_f64(),
            entropy_production: grid.integrate(&sigma).as_f64(),
            min_entropy_production: sigma.iter().copied().fold(T::infinity(), T::min).as_f64(),
            heat_flux: heat,
            total_energy_residual: total,
            ballistic_residual: ballistic,
            relative_energy: relative,
            relative_energy_residual: rel_res,
            r1: errors[0],
            r2: errors[1],
            r3: errors[2],
            apriori: apriori_components(scheme, state, &self.settings),
            min_rho: state.min_rho().as_f64(),
            min_theta: state.min_theta().as_f64(),
        };
        self.previous = Some((state.clone(), reference));
        Ok(report)
    }
}
