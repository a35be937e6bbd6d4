//! Small direct solvers used by the implicit sub-steps.

use crate::real::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("singular system (pivot {pivot:e} at row {row})")]
    Singular { row: usize, pivot: f64 },
}

/// Tridiagonal system `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
///
/// `lower[0]` and `upper[n-1]` are ignored.
#[derive(Debug, Clone)]
pub struct Tridiagonal<T> {
    pub lower: Vec<T>,
    pub diag: Vec<T>,
    pub upper: Vec<T>,
}

impl<T: Real> Tridiagonal<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            lower: vec![T::zero(); n],
            diag: vec![T::zero(); n],
            upper: vec![T::zero(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.lower[i] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.upper[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }

    /// Thomas algorithm. No pivoting, so the matrix should be diagonally
    /// dominant or otherwise well conditioned.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>, LinalgError> {
        let n = self.len();
        if rhs.len() != n || self.lower.len() != n || self.upper.len() != n {
            return Err(LinalgError::Dimension(format!(
                "tridiagonal of size {n} with rhs {}",
                rhs.len()
            )));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let mut c = vec![T::zero(); n];
        let mut d = vec![T::zero(); n];
        let tiny = T::min_positive_value().sqrt();
        let mut beta = self.diag[0];
        if beta.abs() <= tiny || !beta.is_finite() {
            return Err(LinalgError::Singular { row: 0, pivot: beta.as_f64() });
        }
        c[0] = self.upper[0] / beta;
        d[0] = rhs[0] / beta;
        for i in 1..n {
            beta = self.diag[i] - self.lower[i] * c[i - 1];
            if beta.abs() <= tiny || !beta.is_finite() {
                return Err(LinalgError::Singular { row: i, pivot: beta.as_f64() });
            }
            c[i] = if i + 1 < n { self.upper[i] / beta } else { T::zero() };
            d[i] = (rhs[i] - self.lower[i] * d[i - 1]) / beta;
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            let next = x[i + 1];
            x[i] -= c[i] * next;
        }
        Ok(x)
    }
}

/// Dense row-major square matrix.
#[derive(Debug, Clone)]
pub struct Dense<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Real> Dense<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![T::zero(); n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] += v;
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum())
            .collect()
    }

    /// Gaussian elimination with partial pivoting; consumes a copy.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>, LinalgError> {
        let n = self.n;
        if rhs.len() != n {
            return Err(LinalgError::Dimension(format!("dense {n}x{n} with rhs {}", rhs.len())));
        }
        let mut a = self.data.clone();
        let mut b = rhs.to_vec();
        let scale = a.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tiny = scale * T::epsilon() * T::lit(1e-3);
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= tiny || !pmax.is_finite() {
                return Err(LinalgError::Singular { row: k, pivot: pmax.as_f64() });
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                b.swap(k, p);
            }
            let piv = a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / piv;
                if f == T::zero() {
                    continue;
                }
                for j in k..n {
                    let akj = a[k * n + j];
                    a[i * n + j] -= f * akj;
                }
                let bk = b[k];
                b[i] -= f * bk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = b[k];
            for j in k + 1..n {
                acc -= a[k * n + j] * b[j];
            }
            b[k] = acc / a[k * n + k];
        }
        Ok(b)
    }
}

/// Largest absolute entry.
pub fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}
