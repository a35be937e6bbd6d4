use crate::diagnostics::DiagnosticsError;
use crate::discretization::{BoundaryData, Grid1D, Side};
use crate::real::Real;

/// Admissible temperature extension: a smooth positive field whose wall
/// values are the boundary temperature.
pub trait TemperatureExtension<T: Real> {
    fn values(&self, t: T, grid: &Grid1D<T>) -> Vec<T>;
    fn gradient(&self, t: T, grid: &Grid1D<T>) -> Vec<T>;
    fn time_derivative(&self, t: T, grid: &Grid1D<T>) -> Vec<T>;

    /// Checks positivity and the wall traces against `bd` (relative `1e-12`).
    fn check(&self, t: T, grid: &Grid1D<T>, bd: &BoundaryData<T>) -> Result<Vec<T>, DiagnosticsError> {
        let v = self.values(t, grid);
        if let Some(i) = v.iter().position(|x| !(*x > T::zero()) || !x.is_finite()) {
            return Err(DiagnosticsError::Contract(format!("extension {} at node {i}, t = {t}", v[i])));
        }
        let n = v.len() - 1;
        for (side, i) in [(Side::Left, 0), (Side::Right, n)] {
            let tb = bd.theta_b(side, t);
            if (v[i] - tb).abs() > T::rel_tol(1e-12) * tb.abs().max(T::one()) {
                return Err(DiagnosticsError::Contract(format!(
                    "extension {} differs from the wall temperature {tb} on {side:?} at t = {t}",
                    v[i]
                )));
            }
        }
        Ok(v)
    }
}

/// Linear interpolation of the wall temperatures, clamped to the wall range
/// so the discrete maximum principle holds bit for bit.
pub fn harmonic_extension<T: Real>(bd: &BoundaryData<T>, t: T, grid: &Grid1D<T>) -> Vec<T> {
    let (a, b) = (bd.theta_b(Side::Left, t), bd.theta_b(Side::Right, t));
    let (lo, hi) = (a.min(b), a.max(b));
    let n = grid.n_nodes();
    grid.x()
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            if i == 0 {
                a
            } else if i + 1 == n {
                b
            } else {
                (a + (b - a) * x / grid.length()).max(lo).min(hi)
            }
        })
        .collect()
}

/// [`harmonic_extension`] bound to its boundary data.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicExtension<'a, T> {
    pub bd: &'a BoundaryData<T>,
}

impl<'a, T: Real> TemperatureExtension<T> for HarmonicExtension<'a, T> {
    fn values(&self, t: T, grid: &Grid1D<T>) -> Vec<T> {
        harmonic_extension(self.bd, t, grid)
    }

    fn gradient(&self, t: T, grid: &Grid1D<T>) -> Vec<T> {
        vec![self.bd.theta_ext_x(t); grid.n_nodes()]
    }

    fn time_derivative(&self, t: T, grid: &Grid1D<T>) -> Vec<T> {
        grid.sample(|x| self.bd.theta_ext_t(t, x))
    }
}
