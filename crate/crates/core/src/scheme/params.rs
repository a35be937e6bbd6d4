use crate::discretization::SmoothingKind;
use crate::real::Real;
use crate::scheme::SchemeError;

/// Physical runs only admit the body force; verification runs may also carry
/// manufactured mass and energy sources.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RunMode {
    #[default]
    Physical,
    Verification,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeParams<T> {
    /// density diffusion
    pub eps: T,
    /// pressure, viscosity and conductivity regularization
    pub delta: T,
    pub gamma: T,
    pub n_modes: usize,
    pub n_smooth: u32,
    pub smoothing: SmoothingKind,
    pub dt: T,
    pub t_end: T,
    pub newton_tol: T,
    pub max_newton: usize,
    pub max_halvings: u32,
    pub mode: RunMode,
    /// Permits `eps = delta = 0` for equilibrium and identity checks.
    pub diagnostic: bool,
}

impl<T: Real> Default for SchemeParams<T> {
    fn default() -> Self {
        Self {
            eps: T::lit(1e-2),
            delta: T::lit(1e-3),
            gamma: T::lit(4.0),
            n_modes: 8,
            n_smooth: 10,
            smoothing: SmoothingKind::Quadratic,
            dt: T::lit(1e-3),
            t_end: T::lit(0.1),
            newton_tol: T::rel_tol(1e-10),
            max_newton: 40,
            max_halvings: 10,
            mode: RunMode::Physical,
            diagnostic: false,
        }
    }
}

impl<T: Real> SchemeParams<T> {
    /// Diagnostic mode: no regularization at all.
    pub fn diagnostic(mut self) -> Self {
        self.eps = T::zero();
        self.delta = T::zero();
        self.diagnostic = true;
        self
    }

    pub fn validate(&self) -> Result<(), SchemeError> {
        let bad = |m: String| Err(SchemeError::Params(m));
        if self.diagnostic {
            if self.eps < T::zero() || self.delta < T::zero() {
                return bad("eps and delta must be non-negative".into());
            }
        } else if !(self.eps > T::zero() && self.delta > T::zero()) {
            return bad(format!(
                "eps and delta must be positive outside diagnostic mode (eps = {}, delta = {})",
                self.eps, self.delta
            ));
        }
        if !(self.gamma >= T::lit(2.0)) {
            return bad(format!("Gamma must be >= 2, got {}", self.gamma));
        }
        if !(self.dt > T::zero()) || !(self.t_end >= T::zero()) {
            return bad(format!("need dt > 0 and t_end >= 0 (dt = {}, t_end = {})", self.dt, self.t_end));
        }
        if self.n_modes == 0 || self.n_smooth == 0 || self.max_newton == 0 {
            return bad("n_modes, n_smooth and max_newton must be positive".into());
        }
        Ok(())
    }
}
