//! One-dimensional quadrature: adaptive Simpson, fixed Gauss-Legendre and
//! piecewise Chebyshev antiderivatives.

use crate::real::Real;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T, tol: T) -> T {
    let half = T::lit(0.5);
    let m = (a + b) * half;
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[inline]
fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<T: Real, F: Fn(T) -> T>(
    f: &F,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
) -> T {
    let half = T::lit(0.5);
    let m = (a + b) * half;
    let lm = (a + m) * half;
    let rm = (m + b) * half;
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= T::lit(15.0) * tol {
        return left + right + delta / T::lit(15.0);
    }
    simpson_rec(f, a, m, fa, flm, fm, left, tol * half, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, tol * half, depth - 1)
}

/// Gauss-Legendre nodes and weights on `[-1, 1]` via Newton on the Legendre
/// recurrence.
pub fn gauss_legendre<T: Real>(n: usize) -> (Vec<T>, Vec<T>) {
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0f64, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
            let pnm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (x * pn - pnm1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = T::lit(-x);
        nodes[n - 1 - i] = T::lit(x);
        weights[i] = T::lit(w);
        weights[n - 1 - i] = T::lit(w);
    }
    (nodes, weights)
}

/// Chebyshev expansion of a function's antiderivative on one segment.
///
/// Interpolates the integrand at Chebyshev-Lobatto points and integrates the
/// series term by term; `eval(y)` returns `∫_a^y f`.
#[derive(Debug, Clone)]
pub struct ChebyshevAntiderivative<T> {
    a: T,
    b: T,
    coeffs: Vec<T>,
}

impl<T: Real> ChebyshevAntiderivative<T> {
    pub fn fit<F: Fn(T) -> T>(f: &F, a: T, b: T, degree: usize) -> Self {
        let n = degree;
        let half = T::lit(0.5);
        let mid = (a + b) * half;
        let rad = (b - a) * half;
        let pi = T::PI();
        let nf = T::from_count(n);
        let samples: Vec<T> = (0..=n)
            .map(|k| {
                let t = (pi * T::from_count(k) / nf).cos();
                f(mid + rad * t)
            })
            .collect();
        // Type-I DCT for the interpolant coefficients.
        let mut c = vec![T::zero(); n + 1];
        for (j, cj) in c.iter_mut().enumerate() {
            let mut acc = T::zero();
            for (k, fk) in samples.iter().enumerate() {
                let w = if k == 0 || k == n { half } else { T::one() };
                acc += w * *fk * (pi * T::from_count(j * k) / nf).cos();
            }
            let scale = if j == 0 || j == n { T::one() / nf } else { T::lit(2.0) / nf };
            *cj = acc * scale;
        }
        // Antiderivative in t, C_k = (c_{k-1} - c_{k+1}) / (2k).
        let mut big = vec![T::zero(); n + 2];
        for k in 1..=n + 1 {
            let cm = c[k - 1] * if k == 1 { T::lit(2.0) } else { T::one() };
            let cp = if k + 1 <= n { c[k + 1] } else { T::zero() };
            big[k] = (cm - cp) / (T::lit(2.0) * T::from_count(k));
        }
        // Pin F(-1) = 0.
        let mut at_minus_one = T::zero();
        for (k, bk) in big.iter().enumerate().skip(1) {
            let sign = if k % 2 == 0 { T::one() } else { -T::one() };
            at_minus_one += sign * *bk;
        }
        big[0] = -at_minus_one;
        for v in big.iter_mut() {
            *v *= rad;
        }
        Self { a, b, coeffs: big }
    }

    pub fn lower(&self) -> T {
        self.a
    }

    pub fn upper(&self) -> T {
        self.b
    }

    /// `∫_a^y f` for `y` in the segment (Clenshaw).
    pub fn eval(&self, y: T) -> T {
        let half = T::lit(0.5);
        let t = (y - (self.a + self.b) * half) / ((self.b - self.a) * half);
        let two_t = t + t;
        let (mut b1, mut b2) = (T::zero(), T::zero());
        for &ck in self.coeffs.iter().skip(1).rev() {
            let b0 = ck + two_t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.coeffs[0] + t * b1 - b2
    }

    /// Integral over the whole segment.
    pub fn total(&self) -> T {
        self.eval(self.b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_integrates_smooth_function() {
        let v = adaptive_simpson(&|x: f64| x.exp(), 0.0, 1.0, 1e-13);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre::<f64>(8);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        let m14: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(14)).sum();
        assert!((m14 - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_antiderivative_of_cosine() {
        let seg = ChebyshevAntiderivative::fit(&|y: f64| y.cos(), 0.5, 1.5, 20);
        for &y in &[0.5f64, 0.7, 1.0, 1.33, 1.5] {
            let exact = y.sin() - 0.5f64.sin();
            assert!((seg.eval(y) - exact).abs() < 1e-14, "y={y}");
        }
    }
}
