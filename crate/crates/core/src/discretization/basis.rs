use crate::discretization::{check_len, DiscretizationError, Grid1D};
use crate::real::Real;

/// Sine modes `w_j = sqrt(2/L) sin(j pi x / L)`, `j = 1..=n_modes`, tabulated
/// with their derivatives at the grid nodes.
///
/// Under the trapezoid rule on the vertex grid the modes are orthonormal up to
/// roundoff for every `j < n_cells`.
#[derive(Debug, Clone)]
pub struct GalerkinBasis<T> {
    n_modes: usize,
    length: T,
    values: Vec<Vec<T>>,
    derivatives: Vec<Vec<T>>,
}

/// Builds the basis; more than `n_cells / 4` modes are rejected as aliased.
pub fn build_basis<T: Real>(grid: &Grid1D<T>, n_modes: usize) -> Result<GalerkinBasis<T>, DiscretizationError> {
    let limit = grid.n_cells() / 4;
    if n_modes == 0 || n_modes > limit {
        return Err(DiscretizationError::Aliasing { n_modes, n_cells: grid.n_cells(), limit });
    }
    let length = grid.length();
    let n = grid.n_nodes();
    let mut values = Vec::with_capacity(n_modes);
    let mut derivatives = Vec::with_capacity(n_modes);
    for j in 1..=n_modes {
        let mut v: Vec<T> = grid.x().iter().map(|&x| mode(j, length, x)).collect();
        // exact zeros at the walls
        v[0] = T::zero();
        v[n - 1] = T::zero();
        values.push(v);
        derivatives.push(grid.x().iter().map(|&x| mode_derivative(j, length, x)).collect());
    }
    Ok(GalerkinBasis { n_modes, length, values, derivatives })
}

#[inline]
fn mode<T: Real>(j: usize, length: T, x: T) -> T {
    (T::lit(2.0) / length).sqrt() * (T::from_count(j) * T::PI() * x / length).sin()
}

#[inline]
fn mode_derivative<T: Real>(j: usize, length: T, x: T) -> T {
    let k = T::from_count(j) * T::PI() / length;
    (T::lit(2.0) / length).sqrt() * k * (k * x).cos()
}

impl<T: Real> GalerkinBasis<T> {
    #[inline]
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    /// Nodal values of mode `k` (zero based, i.e. `w_{k+1}`).
    #[inline]
    pub fn values(&self, k: usize) -> &[T] {
        &self.values[k]
    }

    #[inline]
    pub fn derivatives(&self, k: usize) -> &[T] {
        &self.derivatives[k]
    }

    /// Mode `k` at an arbitrary point.
    pub fn eval(&self, k: usize, x: T) -> T {
        mode(k + 1, self.length, x)
    }

    pub fn eval_derivative(&self, k: usize, x: T) -> T {
        mode_derivative(k + 1, self.length, x)
    }

    /// `sum_k c_k w_k` at the nodes.
    pub fn reconstruct(&self, coeffs: &[T]) -> Vec<T> {
        combine(&self.values, coeffs)
    }

    /// `sum_k c_k w_k'` at the nodes.
    pub fn reconstruct_derivative(&self, coeffs: &[T]) -> Vec<T> {
        combine(&self.derivatives, coeffs)
    }

    /// Discrete `L^2` projection coefficients `<f, w_k>`.
    pub fn project(&self, grid: &Grid1D<T>, f: &[T]) -> Result<Vec<T>, DiscretizationError> {
        check_len(grid.n_nodes(), f.len())?;
        Ok(self.values.iter().map(|w| grid.inner(f, w)).collect())
    }

    /// Gram matrix of the modes under the trapezoid rule.
    pub fn gram(&self, grid: &Grid1D<T>) -> Vec<Vec<T>> {
        self.values
            .iter()
            .map(|wi| self.values.iter().map(|wj| grid.inner(wi, wj)).collect())
            .collect()
    }
}

fn combine<T: Real>(table: &[Vec<T>], coeffs: &[T]) -> Vec<T> {
    let n = table.first().map_or(0, Vec::len);
    let mut out = vec![T::zero(); n];
    for (row, &c) in table.iter().zip(coeffs) {
        if c == T::zero() {
            continue;
        }
        for (o, w) in out.iter_mut().zip(row) {
            *o += c * *w;
        }
    }
    out
}
