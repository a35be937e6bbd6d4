//! Equation of state built from a structural pressure function `P(Z)`,
//! `Z = rho / theta^{3/2}`, plus a radiation component `a theta^4`.

use std::fmt::Debug;
use std::sync::{Arc, OnceLock};

use crate::quadrature::{adaptive_simpson, ChebyshevAntiderivative};
use crate::real::Real;
use crate::thermo::{ThermoError, ThermoPoint};

/// User supplied structural pressure with its derivative.
pub trait StructuralPressure<T>: Send + Sync + Debug {
    fn value(&self, z: T) -> T;
    fn derivative(&self, z: T) -> T;
    fn name(&self) -> String;
    /// Closed form of `(5/3) P - P' Z` when the generic expression cancels badly.
    fn deficit(&self, _z: T) -> Option<T> {
        None
    }
}

/// `P(Z) = Z^{5/3} + Z / (1 + Z)`; admissible, no closed-form entropy is used
/// for it so it exercises the tabulated path.
#[derive(Debug, Clone, Copy, Default)]
pub struct SaturatingPressure;

impl<T: Real> StructuralPressure<T> for SaturatingPressure {
    fn value(&self, z: T) -> T {
        z.powf(T::lit(5.0 / 3.0)) + z / (T::one() + z)
    }
    fn derivative(&self, z: T) -> T {
        let d = T::one() + z;
        T::lit(5.0 / 3.0) * z.powf(T::lit(2.0 / 3.0)) + T::one() / (d * d)
    }
    fn name(&self) -> String {
        "saturating".into()
    }
}

/// `P(Z) = Z^2`. Violates the structural upper bound; kept for validator tests.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadraticPressure;

impl<T: Real> StructuralPressure<T> for QuadraticPressure {
    fn value(&self, z: T) -> T {
        z * z
    }
    fn derivative(&self, z: T) -> T {
        z + z
    }
    fn name(&self) -> String {
        "quadratic".into()
    }
}

#[derive(Debug, Clone)]
pub enum PressureLaw<T> {
    /// `P(Z) = linear Z + degenerate Z^{5/3}`; the default is `(1, 1)`.
    Mixture { linear: T, degenerate: T },
    Custom(Arc<dyn StructuralPressure<T>>),
}

impl<T: Real> PressureLaw<T> {
    pub fn value(&self, z: T) -> T {
        match self {
            Self::Mixture { linear, degenerate } => {
                *linear * z + *degenerate * z.powf(T::lit(5.0 / 3.0))
            }
            Self::Custom(p) => p.value(z),
        }
    }

    pub fn derivative(&self, z: T) -> T {
        match self {
            Self::Mixture { linear, degenerate } => {
                *linear + T::lit(5.0 / 3.0) * *degenerate * z.powf(T::lit(2.0 / 3.0))
            }
            Self::Custom(p) => p.derivative(z),
        }
    }

    /// `(5/3) P(Z) - P'(Z) Z`, the quantity bounded by the structural hypothesis.
    pub fn deficit(&self, z: T) -> T {
        match self {
            // exact cancellation of the degenerate part
            Self::Mixture { linear, .. } => T::lit(2.0 / 3.0) * *linear * z,
            Self::Custom(p) => p
                .deficit(z)
                .unwrap_or_else(|| T::lit(5.0 / 3.0) * p.value(z) - p.derivative(z) * z),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Mixture { linear, degenerate } => format!("mixture({linear}, {degenerate})"),
            Self::Custom(p) => p.name(),
        }
    }
}

/// Piecewise Chebyshev table of the structural entropy on `y = ln Z`.
#[derive(Debug, Clone)]
struct EntropyTable<T> {
    segments: Vec<ChebyshevAntiderivative<T>>,
    /// value of the structural entropy at each segment's lower end
    offsets: Vec<T>,
    y_min: T,
    y_max: T,
}

const TABLE_HALF_WIDTH: i32 = 40;
const TABLE_DEGREE: usize = 24;

#[derive(Debug, Clone)]
pub struct EquationOfState<T> {
    pub law: PressureLaw<T>,
    /// radiation constant `a >= 0`
    pub radiation: T,
    /// value of the structural entropy at `Z = 1`
    pub s_offset: T,
    table: OnceLock<EntropyTable<T>>,
}

impl<T: Real> Default for EquationOfState<T> {
    fn default() -> Self {
        Self::new(
            PressureLaw::Mixture { linear: T::one(), degenerate: T::one() },
            T::zero(),
            T::zero(),
        )
    }
}

impl<T: Real> EquationOfState<T> {
    pub fn new(law: PressureLaw<T>, radiation: T, s_offset: T) -> Self {
        Self { law, radiation, s_offset, table: OnceLock::new() }
    }

    pub fn with_radiation(mut self, a: T) -> Self {
        self.radiation = a;
        self
    }

    pub fn with_s_offset(mut self, s0: T) -> Self {
        self.s_offset = s0;
        self
    }

    #[inline]
    pub fn z(rho: T, theta: T) -> T {
        rho / theta.powf(T::lit(1.5))
    }

    /// `p = theta^{5/2} P(Z) + (a/3) theta^4`.
    pub fn pressure(&self, pt: ThermoPoint<T>) -> Result<T, ThermoError> {
        finite(self.pressure_unchecked(pt.rho(), pt.theta()), "pressure")
    }

    /// Pressure also defined at `rho = 0`, where only radiation remains.
    pub fn pressure_at(&self, rho: T, theta: T) -> Result<T, ThermoError> {
        if !(rho >= T::zero()) || !(theta > T::zero()) {
            return Err(ThermoError::Domain(format!(
                "pressure needs rho >= 0 and theta > 0, got ({rho}, {theta})"
            )));
        }
        finite(self.pressure_unchecked(rho, theta), "pressure")
    }

    #[inline]
    pub fn pressure_unchecked(&self, rho: T, theta: T) -> T {
        let z = Self::z(rho, theta);
        theta.powf(T::lit(2.5)) * self.law.value(z)
            + self.radiation / T::lit(3.0) * theta.powi(4)
    }

    /// `e = (3/2) theta^{5/2} P(Z) / rho + a theta^4 / rho`.
    pub fn internal_energy(&self, pt: ThermoPoint<T>) -> Result<T, ThermoError> {
        finite(self.internal_energy_unchecked(pt.rho(), pt.theta()), "internal energy")
    }

    /// As [`Self::internal_energy`] but rejects `rho = 0` explicitly.
    pub fn internal_energy_at(&self, rho: T, theta: T) -> Result<T, ThermoError> {
        if rho == T::zero() {
            return Err(ThermoError::Division("internal energy at rho = 0".into()));
        }
        let pt = ThermoPoint::new(rho, theta)?;
        self.internal_energy(pt)
    }

    #[inline]
    pub fn internal_energy_unchecked(&self, rho: T, theta: T) -> T {
        self.energy_density(rho, theta) / rho
    }

    /// `rho e`, well defined at `rho = 0`.
    #[inline]
    pub fn energy_density(&self, rho: T, theta: T) -> T {
        let z = Self::z(rho, theta);
        T::lit(1.5) * theta.powf(T::lit(2.5)) * self.law.value(z) + self.radiation * theta.powi(4)
    }

    /// `s = S(Z) + (4a/3) theta^3 / rho`.
    pub fn entropy(&self, pt: ThermoPoint<T>) -> Result<T, ThermoError> {
        finite(self.entropy_unchecked(pt.rho(), pt.theta()), "entropy")
    }

    #[inline]
    pub fn entropy_unchecked(&self, rho: T, theta: T) -> T {
        self.structural_entropy(Self::z(rho, theta))
            + T::lit(4.0 / 3.0) * self.radiation * theta.powi(3) / rho
    }

    /// `S'(Z) = -(3/2) ((5/3) P(Z) - P'(Z) Z) / Z^2`.
    pub fn structural_entropy_derivative(&self, z: T) -> Result<T, ThermoError> {
        if !(z > T::zero()) {
            return Err(ThermoError::Domain(format!("structural entropy needs Z > 0, got {z}")));
        }
        Ok(self.structural_entropy_derivative_unchecked(z))
    }

    #[inline]
    pub fn structural_entropy_derivative_unchecked(&self, z: T) -> T {
        -T::lit(1.5) * self.law.deficit(z) / (z * z)
    }

    /// Structural entropy normalized by `S(1) = s_offset`.
    pub fn structural_entropy(&self, z: T) -> T {
        match &self.law {
            PressureLaw::Mixture { linear, .. } => self.s_offset - *linear * z.ln(),
            PressureLaw::Custom(_) => self.tabulated_entropy(z),
        }
    }

    /// Integrand of the structural entropy in log variables, `Z S'(Z)`.
    fn log_slope(&self, y: T) -> T {
        let z = y.exp();
        -T::lit(1.5) * self.law.deficit(z) / z
    }

    fn table(&self) -> &EntropyTable<T> {
        self.table.get_or_init(|| {
            let f = |y: T| self.log_slope(y);
            let mut segments = Vec::new();
            for k in -TABLE_HALF_WIDTH..TABLE_HALF_WIDTH {
                let a = T::lit(k as f64);
                segments.push(ChebyshevAntiderivative::fit(&f, a, a + T::one(), TABLE_DEGREE));
            }
            let mid = TABLE_HALF_WIDTH as usize;
            let mut offsets = vec![T::zero(); segments.len()];
            offsets[mid] = self.s_offset;
            for i in mid + 1..segments.len() {
                offsets[i] = offsets[i - 1] + segments[i - 1].total();
            }
            for i in (0..mid).rev() {
                offsets[i] = offsets[i + 1] - segments[i].total();
            }
            EntropyTable {
                segments,
                offsets,
                y_min: T::lit(-(TABLE_HALF_WIDTH as f64)),
                y_max: T::lit(TABLE_HALF_WIDTH as f64),
            }
        })
    }

    fn tabulated_entropy(&self, z: T) -> T {
        let y = z.ln();
        let table = self.table();
        if y < table.y_min || y > table.y_max {
            let edge = if y < table.y_min { table.y_min } else { table.y_max };
            let f = |s: T| self.log_slope(s);
            return self.table_value(edge) + adaptive_simpson(&f, edge, y, T::rel_tol(1e-12));
        }
        self.table_value(y)
    }

    fn table_value(&self, y: T) -> T {
        let table = self.table();
        let idx = (y - table.y_min).floor().to_usize().unwrap_or(0).min(table.segments.len() - 1);
        table.offsets[idx] + table.segments[idx].eval(y)
    }

    /// Asymptotic ratio `P(Z)/Z^{5/3}` as `Z -> infinity`.
    pub fn p_infinity(&self) -> T {
        match &self.law {
            PressureLaw::Mixture { degenerate, .. } => *degenerate,
            PressureLaw::Custom(p) => {
                let z = T::lit(1e12);
                p.value(z) / z.powf(T::lit(5.0 / 3.0))
            }
        }
    }

    /// Analytic partial derivatives of `p`, `e` and `s` at a point.
    pub fn partials(&self, rho: T, theta: T) -> Partials<T> {
        let z = Self::z(rho, theta);
        let pv = self.law.value(z);
        let dp = self.law.derivative(z);
        let a = self.radiation;
        let t32 = theta.powf(T::lit(1.5));
        let t52 = theta.powf(T::lit(2.5));
        let mixed = T::lit(2.5) * pv - T::lit(1.5) * dp * z;
        let p = t52 * pv + a / T::lit(3.0) * theta.powi(4);
        let p_rho = theta * dp;
        let p_theta = t32 * mixed + T::lit(4.0 / 3.0) * a * theta.powi(3);
        let rho_e = T::lit(1.5) * t52 * pv + a * theta.powi(4);
        let e = rho_e / rho;
        let rho_e_rho = T::lit(1.5) * theta * dp;
        let rho_e_theta = T::lit(1.5) * t32 * mixed + T::lit(4.0) * a * theta.powi(3);
        let e_rho = (rho_e_rho - e) / rho;
        let e_theta = rho_e_theta / rho;
        let s_prime = self.structural_entropy_derivative_unchecked(z);
        let s = self.structural_entropy(z) + T::lit(4.0 / 3.0) * a * theta.powi(3) / rho;
        let s_rho = s_prime / t32 - T::lit(4.0 / 3.0) * a * theta.powi(3) / (rho * rho);
        let s_theta = -T::lit(1.5) * s_prime * z / theta + T::lit(4.0) * a * theta * theta / rho;
        Partials { p, p_rho, p_theta, e, e_rho, e_theta, s, s_rho, s_theta }
    }

    /// Temperature with `s(rho, theta) = s_target`, by bisection on `ln theta`
    /// followed by Newton polishing.
    pub fn theta_from_entropy(&self, rho: T, s_target: T) -> Result<T, ThermoError> {
        let f = |th: T| self.entropy_unchecked(rho, th) - s_target;
        let df = |th: T| self.partials(rho, th).s_theta;
        monotone_invert(f, df, "entropy")
    }

    /// Temperature with `rho (e(rho, theta) + extra theta) = target` at fixed rho.
    pub fn theta_from_energy_density(
        &self,
        rho: T,
        extra_heat_capacity: T,
        target: T,
    ) -> Result<T, ThermoError> {
        let f = |th: T| self.energy_density(rho, th) + rho * extra_heat_capacity * th - target;
        let df = |th: T| {
            let pa = self.partials(rho, th);
            rho * (pa.e_theta + extra_heat_capacity)
        };
        monotone_invert(f, df, "energy density")
    }
}

/// Analytic derivatives of the thermodynamic functions.
#[derive(Debug, Clone, Copy)]
pub struct Partials<T> {
    pub p: T,
    pub p_rho: T,
    pub p_theta: T,
    pub e: T,
    pub e_rho: T,
    pub e_theta: T,
    pub s: T,
    pub s_rho: T,
    pub s_theta: T,
}

pub(crate) const THETA_MIN: f64 = 1e-8;
pub(crate) const THETA_MAX: f64 = 1e8;

/// Root of an increasing function of temperature on `[1e-8, 1e8]`.
fn monotone_invert<T: Real>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    what: &str,
) -> Result<T, ThermoError> {
    let mut lo = T::lit(THETA_MIN).ln();
    let mut hi = T::lit(THETA_MAX).ln();
    let (f_lo, f_hi) = (f(lo.exp()), f(hi.exp()));
    if !(f_lo <= T::zero() && f_hi >= T::zero()) {
        return Err(ThermoError::Inversion(format!(
            "{what} target outside the attainable range (residuals {f_lo} .. {f_hi})"
        )));
    }
    let tol = T::rel_tol(1e-12);
    // bisection in log space until the bracket is narrow, then Newton
    while hi - lo > T::lit(1e-3) {
        let mid = (lo + hi) * T::lit(0.5);
        if f(mid.exp()) > T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut th = ((lo + hi) * T::lit(0.5)).exp();
    let (t_lo, t_hi) = (lo.exp(), hi.exp());
    for _ in 0..100 {
        let r = f(th);
        let d = df(th);
        let mut next = th - r / d;
        if !(next > t_lo && next < t_hi) || !next.is_finite() {
            next = (th + if r > T::zero() { t_lo } else { t_hi }) * T::lit(0.5);
        }
        let done = (next - th).abs() <= tol * th;
        th = next;
        if done {
            return Ok(th);
        }
    }
    Err(ThermoError::Inversion(format!("{what} inversion did not converge")))
}

fn finite<T: Real>(v: T, what: &str) -> Result<T, ThermoError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ThermoError::Overflow(format!("{what} is not finite")))
    }
}
