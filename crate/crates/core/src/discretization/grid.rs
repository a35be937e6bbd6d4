use crate::discretization::{check_len, DiscretizationError};
use crate::real::Real;

/// Uniform vertex grid on `(0, L)` with nodes `x_i = i h`, `i = 0..=n_cells`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D<T> {
    n_cells: usize,
    length: T,
    h: T,
    x: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> Grid1D<T> {
    pub fn new(n_cells: usize, length: T) -> Result<Self, DiscretizationError> {
        if n_cells < 2 {
            return Err(DiscretizationError::Grid(format!("need at least 2 cells, got {n_cells}")));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(DiscretizationError::Grid(format!("length must be positive, got {length}")));
        }
        let h = length / T::from_count(n_cells);
        let x = (0..=n_cells).map(|i| T::from_count(i) * h).collect();
        let mut weights = vec![h; n_cells + 1];
        weights[0] = h * T::lit(0.5);
        weights[n_cells] = h * T::lit(0.5);
        Ok(Self { n_cells, length, h, x, weights })
    }

    #[inline]
    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Number of nodes, `n_cells + 1`.
    #[inline]
    pub fn n_nodes(&self) -> usize {
        self.n_cells + 1
    }

    #[inline]
    pub fn length(&self) -> T {
        self.length
    }

    #[inline]
    pub fn h(&self) -> T {
        self.h
    }

    #[inline]
    pub fn x(&self) -> &[T] {
        &self.x
    }

    /// Trapezoid weights.
    #[inline]
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Trapezoid rule.
    pub fn integrate(&self, f: &[T]) -> T {
        debug_assert_eq!(f.len(), self.n_nodes());
        f.iter().zip(&self.weights).map(|(a, w)| *a * *w).sum()
    }

    pub fn try_integrate(&self, f: &[T]) -> Result<T, DiscretizationError> {
        check_len(self.n_nodes(), f.len())?;
        Ok(self.integrate(f))
    }

    /// Trapezoid rule of a product.
    pub fn inner(&self, f: &[T], g: &[T]) -> T {
        debug_assert_eq!(f.len(), self.n_nodes());
        debug_assert_eq!(g.len(), self.n_nodes());
        f.iter().zip(g).zip(&self.weights).map(|((a, b), w)| *a * *b * *w).sum()
    }

    /// Face midpoint integral `sum_i h f_{i+1/2}` of per-face values.
    pub fn integrate_faces(&self, f: &[T]) -> T {
        debug_assert_eq!(f.len(), self.n_cells);
        f.iter().copied().sum::<T>() * self.h
    }

    /// Samples a function at the nodes.
    pub fn sample(&self, f: impl Fn(T) -> T) -> Vec<T> {
        self.x.iter().map(|&x| f(x)).collect()
    }
}
