use crate::discretization::DiscretizationError;
use crate::real::Real;

/// Robin condition `df/dn = coeff (f - data)` at one wall, `n` the outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinEnd<T> {
    pub coeff: T,
    pub data: T,
}

/// Wall closure used by [`laplacian`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Closure<T> {
    /// Prescribed wall values; the wall rows use a one-sided second-order stencil.
    Dirichlet { left: T, right: T },
    /// Ghost-node elimination of the Robin conditions (half-cell form).
    Robin { left: RobinEnd<T>, right: RobinEnd<T> },
}

/// Central differences inside, second-order one-sided at the walls.
pub fn gradient<T: Real>(f: &[T], h: T) -> Result<Vec<T>, DiscretizationError> {
    let n = f.len();
    if n < 3 {
        return Err(DiscretizationError::Length { expected: 3, got: n });
    }
    let two_h = h + h;
    let mut g = vec![T::zero(); n];
    for i in 1..n - 1 {
        g[i] = (f[i + 1] - f[i - 1]) / two_h;
    }
    let (three, four) = (T::lit(3.0), T::lit(4.0));
    g[0] = (-three * f[0] + four * f[1] - f[2]) / two_h;
    g[n - 1] = (three * f[n - 1] - four * f[n - 2] + f[n - 3]) / two_h;
    Ok(g)
}

/// In one dimension the divergence coincides with the gradient.
pub fn divergence<T: Real>(f: &[T], h: T) -> Result<Vec<T>, DiscretizationError> {
    gradient(f, h)
}

/// Three point Laplacian with the given wall closure.
pub fn laplacian<T: Real>(f: &[T], h: T, bc: Closure<T>) -> Result<Vec<T>, DiscretizationError> {
    let n = f.len();
    if n < 4 {
        return Err(DiscretizationError::Length { expected: 4, got: n });
    }
    let h2 = h * h;
    let two = T::lit(2.0);
    let mut out = vec![T::zero(); n];
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - two * f[i] + f[i - 1]) / h2;
    }
    match bc {
        Closure::Dirichlet { left, right } => {
            let mut g = f.to_vec();
            g[0] = left;
            g[n - 1] = right;
            for i in [1, n - 2] {
                out[i] = (g[i + 1] - two * g[i] + g[i - 1]) / h2;
            }
            let (four, five) = (T::lit(4.0), T::lit(5.0));
            out[0] = (two * g[0] - five * g[1] + four * g[2] - g[3]) / h2;
            out[n - 1] = (two * g[n - 1] - five * g[n - 2] + four * g[n - 3] - g[n - 4]) / h2;
        }
        Closure::Robin { left, right } => {
            // f'(0) = -df/dn at the left wall, f'(L) = +df/dn at the right wall
            let dl = -left.coeff * (f[0] - left.data);
            let dr = right.coeff * (f[n - 1] - right.data);
            out[0] = two * (f[1] - f[0] - h * dl) / h2;
            out[n - 1] = two * (f[n - 2] - f[n - 1] + h * dr) / h2;
        }
    }
    Ok(out)
}
