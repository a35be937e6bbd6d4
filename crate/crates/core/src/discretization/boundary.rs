use std::fmt::Debug;
use std::sync::Arc;

use crate::discretization::{DiscretizationError, Grid1D};
use crate::real::Real;

/// Wall of the slab.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }

    /// Outward normal, `-1` at `x = 0`, `+1` at `x = L`.
    #[inline]
    pub fn normal<T: Real>(self) -> T {
        match self {
            Side::Left => -T::one(),
            Side::Right => T::one(),
        }
    }
}

/// Classification of a wall by the sign of `u_B . n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointFlow {
    Inflow,
    Outflow,
    /// `u_B . n = 0`
    Impermeable,
}

/// A scalar function of time with its derivative.
pub trait TimeFunction<T>: Send + Sync + Debug {
    fn value(&self, t: T) -> T;
    fn derivative(&self, t: T) -> T;
}

/// Time dependence of a boundary trace.
#[derive(Debug, Clone)]
pub enum Trace<T> {
    Constant(T),
    /// Coefficients in increasing powers of `t`.
    Polynomial(Vec<T>),
    Function(Arc<dyn TimeFunction<T>>),
}

impl<T: Real> Trace<T> {
    pub fn value(&self, t: T) -> T {
        match self {
            Trace::Constant(c) => *c,
            Trace::Polynomial(c) => c.iter().rev().fold(T::zero(), |acc, &ck| acc * t + ck),
            Trace::Function(f) => f.value(t),
        }
    }

    pub fn derivative(&self, t: T) -> T {
        match self {
            Trace::Constant(_) => T::zero(),
            Trace::Polynomial(c) => c
                .iter()
                .enumerate()
                .skip(1)
                .rev()
                .fold(T::zero(), |acc, (k, &ck)| acc * t + T::from_count(k) * ck),
            Trace::Function(f) => f.derivative(t),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Trace::Constant(_) => true,
            Trace::Polynomial(c) => c.iter().skip(1).all(|v| *v == T::zero()),
            Trace::Function(_) => false,
        }
    }
}

/// Boundary traces of density, temperature and velocity at both walls, with
/// the interior extensions of velocity and temperature.
///
/// Both extensions are linear in `x`; for the temperature this is the
/// harmonic extension.
#[derive(Debug, Clone)]
pub struct BoundaryData<T> {
    pub length: T,
    pub rho: [Trace<T>; 2],
    pub theta: [Trace<T>; 2],
    pub u: [Trace<T>; 2],
}

impl<T: Real> BoundaryData<T> {
    pub fn new(length: T, rho: [Trace<T>; 2], theta: [Trace<T>; 2], u: [Trace<T>; 2]) -> Self {
        Self { length, rho, theta, u }
    }

    /// Time independent data.
    pub fn constant(length: T, rho: [T; 2], theta: [T; 2], u: [T; 2]) -> Self {
        Self::new(
            length,
            rho.map(Trace::Constant),
            theta.map(Trace::Constant),
            u.map(Trace::Constant),
        )
    }

    #[inline]
    pub fn rho_b(&self, side: Side, t: T) -> T {
        self.rho[side.index()].value(t)
    }

    #[inline]
    pub fn theta_b(&self, side: Side, t: T) -> T {
        self.theta[side.index()].value(t)
    }

    #[inline]
    pub fn u_b(&self, side: Side, t: T) -> T {
        self.u[side.index()].value(t)
    }

    /// `u_B . n` at a wall.
    #[inline]
    pub fn normal_velocity(&self, side: Side, t: T) -> T {
        self.u_b(side, t) * side.normal::<T>()
    }

    pub fn inflow_indicator(&self, t: T) -> [EndpointFlow; 2] {
        Side::BOTH.map(|side| {
            let un = self.normal_velocity(side, t);
            if un < T::zero() {
                EndpointFlow::Inflow
            } else if un > T::zero() {
                EndpointFlow::Outflow
            } else {
                EndpointFlow::Impermeable
            }
        })
    }

    #[inline]
    fn lerp(&self, x: T, left: T, right: T) -> T {
        left + (right - left) * x / self.length
    }

    pub fn u_ext(&self, t: T, x: T) -> T {
        self.lerp(x, self.u[0].value(t), self.u[1].value(t))
    }

    pub fn u_ext_x(&self, t: T) -> T {
        (self.u[1].value(t) - self.u[0].value(t)) / self.length
    }

    pub fn u_ext_t(&self, t: T, x: T) -> T {
        self.lerp(x, self.u[0].derivative(t), self.u[1].derivative(t))
    }

    pub fn theta_ext(&self, t: T, x: T) -> T {
        self.lerp(x, self.theta[0].value(t), self.theta[1].value(t))
    }

    pub fn theta_ext_x(&self, t: T) -> T {
        (self.theta[1].value(t) - self.theta[0].value(t)) / self.length
    }

    pub fn theta_ext_t(&self, t: T, x: T) -> T {
        self.lerp(x, self.theta[0].derivative(t), self.theta[1].derivative(t))
    }

    pub fn u_ext_nodes(&self, t: T, grid: &Grid1D<T>) -> Vec<T> {
        grid.sample(|x| self.u_ext(t, x))
    }

    pub fn theta_ext_nodes(&self, t: T, grid: &Grid1D<T>) -> Vec<T> {
        grid.sample(|x| self.theta_ext(t, x))
    }

    /// True when the wall temperature is one constant on both walls.
    pub fn wall_temperature_constant(&self) -> bool {
        match (&self.theta[0], &self.theta[1]) {
            (Trace::Constant(a), Trace::Constant(b)) => a == b,
            _ => false,
        }
    }

    /// Checks positivity of the density and temperature traces on `samples`
    /// equally spaced times in `[0, t_end]`.
    pub fn validate(&self, t_end: T, samples: usize) -> Result<(), DiscretizationError> {
        let samples = samples.max(2);
        for k in 0..samples {
            let t = t_end * T::from_count(k) / T::from_count(samples - 1);
            for side in Side::BOTH {
                let (r, th) = (self.rho_b(side, t), self.theta_b(side, t));
                if !(r > T::zero() && th > T::zero()) {
                    return Err(DiscretizationError::State(format!(
                        "boundary density/temperature must stay positive, got ({r}, {th}) at t = {t} on {side:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}
