//! TOML run configuration and its translation into a scheme.

use std::path::Path;
use std::sync::Arc;

use nsf_core::discretization::{BoundaryData, Grid1D, Side, SmoothingKind, Trace};
use nsf_core::scheme::{ConstantForce, Forcing, RunMode, Scheme, SchemeParams};
use nsf_core::thermo::validate::{validate_model, ValidationReport};
use nsf_core::thermo::{
    EquationOfState, Model, PressureLaw, QuadraticPressure, SaturatingPressure, TransportModel,
};
use nsf_core::Real;
use serde::{Deserialize, Serialize};

use crate::manufactured::{CaseId, ManufacturedCase, CASE_LENGTH};

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("parse error: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("hypothesis validation failed:\n{}", .0.join("\n"))]
    Hypotheses(Vec<String>),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Precision {
    F32,
    #[default]
    F64,
}

impl Precision {
    pub fn dtype(self) -> &'static str {
        match self {
            Precision::F32 => "float32",
            Precision::F64 => "float64",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub precision: Precision,
    #[serde(default)]
    pub grid: GridSpec,
    #[serde(default)]
    pub scheme: SchemeSpec,
    #[serde(default)]
    pub eos: EosSpec,
    #[serde(default)]
    pub transport: TransportSpec,
    #[serde(default)]
    pub boundary: BoundarySpec,
    #[serde(default)]
    pub initial: InitialSpec,
    #[serde(default)]
    pub forcing: ForcingSpec,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default)]
    pub diagnostics: DiagnosticsSpec,
    /// Replaces boundary, initial and forcing data by a closed-form trio.
    #[serde(default)]
    pub manufactured: Option<ManufacturedSpec>,
    #[serde(default)]
    pub convergence: ConvergenceSpec,
    #[serde(default)]
    pub weakstrong: WeakStrongSpec,
    #[serde(default)]
    pub ballistic: BallisticSpec,
}

fn default_seed() -> u64 {
    7
}

impl Default for RunConfig {
    fn default() -> Self {
        toml::from_str("").expect("empty config uses defaults")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub cells: usize,
    pub length: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { cells: 64, length: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothingSpec {
    #[default]
    Quadratic,
    Mollified,
    Sharp,
}

impl From<SmoothingSpec> for SmoothingKind {
    fn from(s: SmoothingSpec) -> Self {
        match s {
            SmoothingSpec::Quadratic => SmoothingKind::Quadratic,
            SmoothingSpec::Mollified => SmoothingKind::Mollified,
            SmoothingSpec::Sharp => SmoothingKind::Sharp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    #[default]
    Physical,
    Verification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SchemeSpec {
    pub eps: f64,
    pub delta: f64,
    pub gamma: f64,
    pub modes: usize,
    pub smoothing: SmoothingSpec,
    pub n_smooth: u32,
    pub dt: f64,
    pub t_end: f64,
    pub newton_tol: f64,
    pub max_newton: usize,
    pub max_halvings: u32,
    pub mode: ModeSpec,
    /// allows `eps = delta = 0`
    pub diagnostic: bool,
}

impl Default for SchemeSpec {
    fn default() -> Self {
        let p = SchemeParams::<f64>::default();
        Self {
            eps: p.eps,
            delta: p.delta,
            gamma: p.gamma,
            modes: p.n_modes,
            smoothing: SmoothingSpec::Quadratic,
            n_smooth: p.n_smooth,
            dt: p.dt,
            t_end: p.t_end,
            newton_tol: 1e-10,
            max_newton: p.max_newton,
            max_halvings: p.max_halvings,
            mode: ModeSpec::Physical,
            diagnostic: false,
        }
    }
}

impl SchemeSpec {
    pub fn params<T: Real>(&self) -> SchemeParams<T> {
        SchemeParams {
            eps: T::lit(self.eps),
            delta: T::lit(self.delta),
            gamma: T::lit(self.gamma),
            n_modes: self.modes,
            n_smooth: self.n_smooth,
            smoothing: self.smoothing.into(),
            dt: T::lit(self.dt),
            t_end: T::lit(self.t_end),
            newton_tol: T::rel_tol(self.newton_tol),
            max_newton: self.max_newton,
            max_halvings: self.max_halvings,
            mode: match self.mode {
                ModeSpec::Physical => RunMode::Physical,
                ModeSpec::Verification => RunMode::Verification,
            },
            diagnostic: self.diagnostic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LawSpec {
    /// `linear Z + degenerate Z^{5/3}`
    #[default]
    Mixture,
    /// `Z^{5/3} + Z/(1+Z)`
    Saturating,
    /// `Z^2`
    Quadratic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EosSpec {
    pub law: LawSpec,
    pub linear: f64,
    pub degenerate: f64,
    pub radiation: f64,
    pub s_offset: f64,
}

impl Default for EosSpec {
    fn default() -> Self {
        Self { law: LawSpec::Mixture, linear: 1.0, degenerate: 1.0, radiation: 0.0, s_offset: 0.0 }
    }
}

impl EosSpec {
    pub fn build<T: Real>(&self) -> EquationOfState<T> {
        let law = match self.law {
            LawSpec::Mixture => PressureLaw::Mixture { linear: T::lit(self.linear), degenerate: T::lit(self.degenerate) },
            LawSpec::Saturating => PressureLaw::Custom(Arc::new(SaturatingPressure)),
            LawSpec::Quadratic => PressureLaw::Custom(Arc::new(QuadraticPressure)),
        };
        EquationOfState::new(law, T::lit(self.radiation), T::lit(self.s_offset))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransportSpec {
    pub mu0: f64,
    pub eta0: f64,
    pub kappa0: f64,
    pub lambda: f64,
    pub beta: f64,
    /// dimension in the traceless part of the stress
    pub d_eff: f64,
}

impl Default for TransportSpec {
    fn default() -> Self {
        Self { mu0: 1.0, eta0: 0.0, kappa0: 1.0, lambda: 1.0, beta: 3.0, d_eff: 3.0 }
    }
}

/// Wall traces as polynomial coefficients in increasing powers of `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundarySpec {
    pub rho_left: Vec<f64>,
    pub rho_right: Vec<f64>,
    pub theta_left: Vec<f64>,
    pub theta_right: Vec<f64>,
    pub u_left: Vec<f64>,
    pub u_right: Vec<f64>,
}

impl Default for BoundarySpec {
    fn default() -> Self {
        Self {
            rho_left: vec![1.0],
            rho_right: vec![1.0],
            theta_left: vec![1.0],
            theta_right: vec![1.0],
            u_left: vec![0.0],
            u_right: vec![0.0],
        }
    }
}

fn trace<T: Real>(coeffs: &[f64], what: &str) -> Result<Trace<T>, ConfigError> {
    match coeffs {
        [] => Err(ConfigError::Invalid(format!("boundary trace `{what}` has no coefficients"))),
        [c] => Ok(Trace::Constant(T::lit(*c))),
        cs => Ok(Trace::Polynomial(cs.iter().map(|c| T::lit(*c)).collect())),
    }
}

impl BoundarySpec {
    pub fn build<T: Real>(&self, length: f64) -> Result<BoundaryData<T>, ConfigError> {
        Ok(BoundaryData::new(
            T::lit(length),
            [trace(&self.rho_left, "rho_left")?, trace(&self.rho_right, "rho_right")?],
            [trace(&self.theta_left, "theta_left")?, trace(&self.theta_right, "theta_right")?],
            [trace(&self.u_left, "u_left")?, trace(&self.u_right, "u_right")?],
        ))
    }
}

/// `base + bump sin(pi x / L)` per field; a missing base interpolates the
/// wall values at `t = 0` linearly.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSpec {
    pub rho_base: Option<f64>,
    pub rho_bump: f64,
    pub theta_base: Option<f64>,
    pub theta_bump: f64,
    pub u_base: Option<f64>,
    pub u_bump: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ForcingSpec {
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    /// probe every `stride` accepted steps
    pub stride: usize,
    /// write a snapshot every `snapshot_every` probed rows, 0 disables
    pub snapshot_every: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { stride: 1, snapshot_every: 10 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantSpec {
    #[default]
    Regularized,
    Physical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsSpec {
    /// `K` of the sixth-moment chain
    pub truncation: f64,
    /// fixed entropy-bound constant; fitted per state when absent
    pub entropy_constant: Option<f64>,
    pub variant: VariantSpec,
}

impl Default for DiagnosticsSpec {
    fn default() -> Self {
        Self { truncation: 2.0, entropy_constant: None, variant: VariantSpec::Regularized }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManufacturedSpec {
    pub case: CaseId,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergenceSpec {
    pub case: CaseId,
    /// time steps of the dt ladder, on `dt_cells` cells
    pub dt_levels: Vec<f64>,
    pub dt_cells: usize,
    /// cell counts of the h ladder, at time step `h_dt`
    pub h_levels: Vec<usize>,
    pub h_dt: f64,
    pub t_end: f64,
    /// differences below this are reported as exact
    pub floor: f64,
    pub min_order: f64,
}

impl Default for ConvergenceSpec {
    fn default() -> Self {
        Self {
            case: CaseId::HeatedWall,
            dt_levels: vec![4e-3, 2e-3, 1e-3, 5e-4],
            dt_cells: 64,
            h_levels: vec![32, 64, 128, 256],
            h_dt: 1e-3,
            t_end: 0.1,
            floor: 1e-11,
            min_order: 0.9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WeakStrongSpec {
    pub case: CaseId,
    pub amplitudes: Vec<f64>,
    /// sine modes in the random perturbation profile
    pub profile_modes: usize,
    pub cells: usize,
    pub dt: f64,
    /// time steps at which the unperturbed floor is measured
    pub floor_dt: Vec<f64>,
    pub t_end: f64,
    pub min_slope: f64,
}

impl Default for WeakStrongSpec {
    fn default() -> Self {
        Self {
            case: CaseId::HeatedWall,
            amplitudes: vec![1e-2, 1e-3, 1e-4],
            profile_modes: 4,
            cells: 64,
            dt: 1e-3,
            floor_dt: vec![2e-3, 1e-3, 5e-4],
            t_end: 0.1,
            min_slope: 0.9,
        }
    }
}

/// Refinement ladder of the ballistic balance on the configured physical flow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BallisticSpec {
    /// cell counts; the time step halves with each doubling
    pub cells: Vec<usize>,
    pub dt: f64,
    pub t_end: f64,
    /// interior temperatures of the second half of the samples are scaled
    /// by this factor in the corrupted copy
    pub corruption: f64,
    /// tolerance is this multiple of the defect change to the next level
    pub safety: f64,
}

impl Default for BallisticSpec {
    fn default() -> Self {
        Self { cells: vec![32, 64, 128, 256], dt: 2e-3, t_end: 0.1, corruption: 1.1, safety: 3.0 }
    }
}

impl RunConfig {
    pub fn model<T: Real>(&self) -> Model<T> {
        let t = &self.transport;
        Model {
            eos: self.eos.build(),
            transport: TransportModel::new(T::lit(t.mu0), T::lit(t.eta0), T::lit(t.kappa0), T::lit(t.lambda), T::lit(t.beta)),
            d_eff: T::lit(t.d_eff),
        }
    }

    fn wall_temperature_constant(&self) -> bool {
        if self.manufactured.is_some() {
            return false;
        }
        let b = &self.boundary;
        let flat = |c: &[f64]| c.iter().skip(1).all(|v| *v == 0.0);
        flat(&b.theta_left) && flat(&b.theta_right) && b.theta_left.first() == b.theta_right.first()
    }

    /// Structural hypothesis checks on the configured model.
    pub fn validation(&self) -> ValidationReport {
        validate_model(&self.model::<f64>(), self.wall_temperature_constant())
    }

    /// Checks that do not need a scheme.
    pub fn check(&self) -> Result<Vec<String>, ConfigError> {
        let report = self.validation();
        let violations: Vec<String> = report.violations().map(|f| f.to_string()).collect();
        if !violations.is_empty() {
            return Err(ConfigError::Hypotheses(violations));
        }
        if self.grid.cells < 2 || !(self.grid.length > 0.0) {
            return Err(ConfigError::Invalid("grid needs at least 2 cells and a positive length".into()));
        }
        if self.manufactured.is_some() && self.grid.length != CASE_LENGTH {
            return Err(ConfigError::Invalid(format!("manufactured cases live on a slab of length {CASE_LENGTH}")));
        }
        if self.output.stride == 0 {
            return Err(ConfigError::Invalid("output.stride must be positive".into()));
        }
        Ok(report.warnings().map(|f| f.to_string()).collect())
    }

    /// Scheme and, for manufactured runs, the case driving it. Manufactured
    /// runs always use verification mode.
    pub fn build<T: Real>(&self) -> Result<(Scheme<T>, Option<ManufacturedCase<T>>), ConfigError> {
        let model = self.model::<T>();
        let mut params = self.scheme.params::<T>();
        let grid = Grid1D::new(self.grid.cells, T::lit(self.grid.length)).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let (bd, case, forcing): (BoundaryData<T>, _, Arc<dyn Forcing<T>>) = match &self.manufactured {
            Some(m) => {
                params.mode = RunMode::Verification;
                let case = ManufacturedCase::new(m.case, model.clone(), &params);
                (case.boundary_data(), Some(case.clone()), Arc::new(case))
            }
            None => (self.boundary.build(self.grid.length)?, None, Arc::new(ConstantForce(T::lit(self.forcing.g)))),
        };
        let scheme = Scheme::new(grid, bd, model, params, forcing).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        Ok((scheme, case))
    }

    /// Nodal `(rho, theta, u)` at `t = 0`.
    pub fn initial_fields<T: Real>(
        &self,
        scheme: &Scheme<T>,
        case: Option<&ManufacturedCase<T>>,
    ) -> [Vec<T>; 3] {
        use nsf_core::diagnostics::ReferenceTrio;
        let g = &scheme.grid;
        if let Some(c) = case {
            let z = T::zero();
            return [g.sample(|x| c.rho(z, x)), g.sample(|x| c.theta(z, x)), g.sample(|x| c.u(z, x))];
        }
        let bd = &scheme.bd;
        let l = g.length();
        let z = T::zero();
        let i = &self.initial;
        let profile = |base: Option<f64>, bump: f64, walls: [T; 2]| {
            g.sample(|x| {
                let b = base.map(T::lit).unwrap_or_else(|| walls[0] + (walls[1] - walls[0]) * x / l);
                b + T::lit(bump) * (T::PI() * x / l).sin()
            })
        };
        let at = |f: &dyn Fn(Side) -> T| [f(Side::Left), f(Side::Right)];
        [
            profile(i.rho_base, i.rho_bump, at(&|s| bd.rho_b(s, z))),
            profile(i.theta_base, i.theta_bump, at(&|s| bd.theta_b(s, z))),
            profile(i.u_base, i.u_bump, at(&|s| bd.u_b(s, z))),
        ]
    }
}

/// Reads, parses and validates a config. Returns the config with the
/// validator warnings.
pub fn load_config(path: &Path) -> Result<(RunConfig, Vec<String>), ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<(RunConfig, Vec<String>), ConfigError> {
    let cfg: RunConfig = toml::from_str(text)?;
    let warnings = cfg.check()?;
    Ok((cfg, warnings))
}
