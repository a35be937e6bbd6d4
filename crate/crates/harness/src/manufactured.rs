//! Closed-form trios with the forcings that make them exact solutions of the
//! regularized system.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nsf_core::diagnostics::ReferenceTrio;
use nsf_core::discretization::{BoundaryData, NegativePart, Side, TimeFunction, Trace};
use nsf_core::scheme::{Forcing, SchemeParams};
use nsf_core::thermo::Model;
use nsf_core::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseId {
    /// uniform flow through the slab
    Steady,
    /// density bump carried by a uniform stream
    Bump,
    /// fluid at rest with the left wall heated up
    HeatedWall,
}

impl CaseId {
    pub const ALL: [CaseId; 3] = [CaseId::Steady, CaseId::Bump, CaseId::HeatedWall];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Steady => "steady",
            CaseId::Bump => "bump",
            CaseId::HeatedWall => "heated-wall",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown manufactured case `{0}` (expected steady, bump or heated-wall)")]
pub struct UnknownCase(pub String);

impl FromStr for CaseId {
    type Err = UnknownCase;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| UnknownCase(s.to_string()))
    }
}

/// Value of a field with its first time derivative and first two space
/// derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub v: T,
    pub t: T,
    pub x: T,
    pub xx: T,
}

impl<T: Real> Jet<T> {
    fn constant(v: T) -> Self {
        Self { v, t: T::zero(), x: T::zero(), xx: T::zero() }
    }
}

/// Slab length of every shipped case.
pub const CASE_LENGTH: f64 = 1.0;

const BUMP_SPEED: f64 = 0.5;
const BUMP_WIDTH: f64 = 0.1;
const HEATING_TIME: f64 = 0.05;

/// `(rho, theta, u)` jets of a case at `(t, x)`.
pub fn trio_jets<T: Real>(case: CaseId, t: T, x: T) -> [Jet<T>; 3] {
    let c = T::lit;
    let pi = T::PI();
    match case {
        CaseId::Steady => [Jet::constant(c(1.2)), Jet::constant(c(1.4)), Jet::constant(c(0.3))],
        CaseId::Bump => {
            let w = c(BUMP_WIDTH);
            let xi = (x - c(0.4) - c(BUMP_SPEED) * t) / w;
            let g = (-xi * xi).exp();
            let dg = -c(2.0) * xi * g;
            let ddg = (c(4.0) * xi * xi - c(2.0)) * g;
            let a = c(0.3);
            let rho = Jet { v: T::one() + a * g, t: -a * dg * c(BUMP_SPEED) / w, x: a * dg / w, xx: a * ddg / (w * w) };
            [rho, Jet::constant(T::one()), Jet::constant(c(BUMP_SPEED))]
        }
        CaseId::HeatedWall => {
            let (s, co) = ((pi * x).sin(), (pi * x).cos());
            let rho = Jet { v: T::one() + c(0.1) * co, t: T::zero(), x: -c(0.1) * pi * s, xx: -c(0.1) * pi * pi * co };
            let tau = c(HEATING_TIME);
            let decay = (-t / tau).exp();
            let ramp = T::one() - decay;
            let theta = Jet {
                v: T::one() + c(0.5) * (T::one() - x) * ramp + c(0.1) * s,
                t: c(0.5) * (T::one() - x) * decay / tau,
                x: -c(0.5) * ramp + c(0.1) * pi * co,
                xx: -c(0.1) * pi * pi * s,
            };
            [rho, theta, Jet::constant(T::zero())]
        }
    }
}

/// Regularization constants the forcings are built for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Regularization<T> {
    pub eps: T,
    pub delta: T,
    pub gamma: T,
    pub smoothing: NegativePart,
}

impl<T: Real> Regularization<T> {
    pub fn of(params: &SchemeParams<T>) -> Self {
        Self {
            eps: params.eps,
            delta: params.delta,
            gamma: params.gamma,
            smoothing: NegativePart::new(params.smoothing, params.n_smooth),
        }
    }
}

/// A closed-form trio, its forcings and its boundary data.
#[derive(Debug, Clone)]
pub struct ManufacturedCase<T: Real> {
    pub id: CaseId,
    pub model: Model<T>,
    pub reg: Regularization<T>,
}

/// Wall trace read off the trio, `rho_B` included.
#[derive(Debug, Clone)]
struct WallTrace<T: Real> {
    case: ManufacturedCase<T>,
    side: Side,
    field: usize,
}

impl<T: Real> WallTrace<T> {
    fn x(&self) -> T {
        match self.side {
            Side::Left => T::zero(),
            Side::Right => T::lit(CASE_LENGTH),
        }
    }
}

impl<T: Real> TimeFunction<T> for WallTrace<T> {
    fn value(&self, t: T) -> T {
        if self.field == 0 {
            self.case.rho_b(self.side, t)
        } else {
            trio_jets(self.case.id, t, self.x())[self.field].v
        }
    }

    fn derivative(&self, t: T) -> T {
        if self.field == 0 {
            // rho_B involves the smoothed inflow weight, no closed form needed
            let h = T::lit(1e-5).max(T::epsilon().cbrt());
            let lo = (t - h).max(T::zero());
            (self.value(t + h) - self.value(lo)) / (t + h - lo)
        } else {
            trio_jets(self.case.id, t, self.x())[self.field].t
        }
    }
}

impl<T: Real> ManufacturedCase<T> {
    pub fn new(id: CaseId, model: Model<T>, params: &SchemeParams<T>) -> Self {
        Self { id, model, reg: Regularization::of(params) }
    }

    pub fn length(&self) -> T {
        T::lit(CASE_LENGTH)
    }

    fn u_wall(&self, side: Side, t: T) -> T {
        let x = if side == Side::Left { T::zero() } else { self.length() };
        trio_jets(self.id, t, x)[2].v
    }

    /// Density datum for which the Robin closure `eps rho_x n = (rho - rho_B) sigma`
    /// holds for the trio. Where the inflow weight vanishes the trio's own
    /// density is used.
    pub fn rho_b(&self, side: Side, t: T) -> T {
        let x = if side == Side::Left { T::zero() } else { self.length() };
        let rho = trio_jets(self.id, t, x)[0];
        let n = side.normal::<T>();
        let sigma = self.reg.smoothing.eval(self.u_wall(side, t) * n);
        if sigma == T::zero() {
            rho.v
        } else {
            rho.v - self.reg.eps * rho.x * n / sigma
        }
    }

    /// Boundary data whose traces are the trio's wall values.
    pub fn boundary_data(&self) -> BoundaryData<T> {
        let trace = |side: Side, field: usize| {
            let f: Arc<dyn TimeFunction<T>> = Arc::new(WallTrace { case: self.clone(), side, field });
            Trace::Function(f)
        };
        BoundaryData::new(
            self.length(),
            [trace(Side::Left, 0), trace(Side::Right, 0)],
            [trace(Side::Left, 1), trace(Side::Right, 1)],
            [trace(Side::Left, 2), trace(Side::Right, 2)],
        )
    }

    /// `(f_rho, rho g, f_e)` at `(t, x)`.
    pub fn sources(&self, t: T, x: T) -> [T; 3] {
        let [r, th, u] = trio_jets(self.id, t, x);
        let Regularization { eps, delta, gamma, .. } = self.reg;
        let two = T::lit(2.0);
        let model = &self.model;
        let pa = model.eos.partials(r.v, th.v);

        let f_rho = r.t + r.x * u.v + r.v * u.x - eps * r.xx;

        let nu = model.slab_viscosity(th.v, delta * th.v);
        let dnu = model.slab_viscosity_derivative(th.v, delta);
        let barrier_x = delta * (gamma * r.v.powf(gamma - T::one()) + two * r.v) * r.x;
        let momentum = r.t * u.v + r.v * u.t + r.x * u.v * u.v + two * r.v * u.v * u.x
            + pa.p_rho * r.x
            + pa.p_theta * th.x
            + barrier_x
            - dnu * th.x * u.x
            - nu * u.xx;

        // E = rho (e + delta theta)
        let e_rho = pa.e + r.v * pa.e_rho + delta * th.v;
        let e_theta = r.v * pa.e_theta + delta * r.v;
        let energy = r.v * (pa.e + delta * th.v);
        let e_t = e_rho * r.t + e_theta * th.t;
        let e_x = e_rho * r.x + e_theta * th.x;
        let tr = &model.transport;
        let k = delta * (th.v.powf(gamma) + T::one() / th.v) + tr.kappa(th.v);
        let dk = delta * (gamma * th.v.powf(gamma - T::one()) - T::one() / (th.v * th.v)) + tr.kappa_derivative(th.v);
        let h2 = delta * (gamma * r.v.powf(gamma - two) + two);
        let f_e = e_t + e_x * u.v + energy * u.x - (dk * th.x * th.x + k * th.xx) - nu * u.x * u.x + pa.p * u.x
            - eps * h2 * r.x * r.x
            - delta / (th.v * th.v)
            + eps * th.v.powi(5);
        [f_rho, momentum, f_e]
    }
}

impl<T: Real> ReferenceTrio<T> for ManufacturedCase<T> {
    fn rho(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[0].v
    }
    fn theta(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[1].v
    }
    fn u(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[2].v
    }
    fn rho_t(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[0].t
    }
    fn rho_x(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[0].x
    }
    fn theta_t(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[1].t
    }
    fn theta_x(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[1].x
    }
    fn u_t(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[2].t
    }
    fn u_x(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[2].x
    }
    fn u_xx(&self, t: T, x: T) -> T {
        trio_jets(self.id, t, x)[2].xx
    }
}

impl<T: Real> Forcing<T> for ManufacturedCase<T> {
    fn body_force(&self, t: T, x: T) -> T {
        self.sources(t, x)[1] / trio_jets(self.id, t, x)[0].v
    }

    fn mass_source(&self, t: T, x: T) -> T {
        self.sources(t, x)[0]
    }

    fn energy_source(&self, t: T, x: T) -> T {
        self.sources(t, x)[2]
    }

    fn has_auxiliary_sources(&self) -> bool {
        true
    }
}
