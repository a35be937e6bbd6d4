use crate::quadrature::adaptive_simpson;
use crate::real::Real;

/// `[z]_n^-`: equals `z` below `-1/n`, zero above `1/n`, and the C^1 blend
/// `-(1 - n z)^2 / (4 n)` in between.
pub fn smoothed_negative_part<T: Real>(z: T, n_smooth: u32) -> T {
    let n = T::from_count(n_smooth.max(1) as usize);
    let edge = T::one() / n;
    if z < -edge {
        z
    } else if z > edge {
        T::zero()
    } else {
        let a = T::one() - n * z;
        -a * a / (T::lit(4.0) * n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmoothingKind {
    /// Piecewise quadratic, C^1.
    #[default]
    Quadratic,
    /// Integral of a C^infinity step, C^infinity.
    Mollified,
    /// Plain `min(z, 0)`.
    Sharp,
}

/// Smoothed negative part of a given kind and index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativePart {
    pub kind: SmoothingKind,
    pub n_smooth: u32,
}

impl NegativePart {
    pub fn new(kind: SmoothingKind, n_smooth: u32) -> Self {
        Self { kind, n_smooth: n_smooth.max(1) }
    }

    pub fn eval<T: Real>(&self, z: T) -> T {
        match self.kind {
            SmoothingKind::Quadratic => smoothed_negative_part(z, self.n_smooth),
            SmoothingKind::Sharp => z.min(T::zero()),
            SmoothingKind::Mollified => mollified(z, self.n_smooth),
        }
    }
}

/// `-∫_z^{1/n} H(s) ds` with `H` a smooth step from 1 to 0 across
/// `[-1/n, 1/n]` satisfying `H(s) + H(-s) = 1`.
fn mollified<T: Real>(z: T, n_smooth: u32) -> T {
    let n = T::from_count(n_smooth as usize);
    let edge = T::one() / n;
    if z <= -edge {
        return z;
    }
    if z >= edge {
        return T::zero();
    }
    let step = |s: T| smooth_step(-n * s);
    -adaptive_simpson(&step, z, edge, T::rel_tol(1e-15) * edge)
}

/// C^infinity transition from 0 at `y <= -1` to 1 at `y >= 1`.
fn smooth_step<T: Real>(y: T) -> T {
    let t = (y + T::one()) * T::lit(0.5);
    if t <= T::zero() {
        return T::zero();
    }
    if t >= T::one() {
        return T::one();
    }
    let a = (-T::one() / t).exp();
    let b = (-T::one() / (T::one() - t)).exp();
    a / (a + b)
}
