use crate::quadrature::adaptive_simpson;
use crate::real::Real;

/// Temperature dependent viscosities and heat conductivity.
///
/// `mu = mu0 (1 + theta)^Lambda`, `eta = eta0 (1 + theta)^Lambda`,
/// `kappa = kappa0 (1 + theta^beta)`. The `*_lo`/`*_hi` fields are the
/// envelope constants checked by the validators.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportModel<T> {
    pub mu0: T,
    pub eta0: T,
    pub kappa0: T,
    pub lambda: T,
    pub beta: T,
    pub mu_lo: T,
    pub mu_hi: T,
    pub eta_hi: T,
    pub kappa_lo: T,
    pub kappa_hi: T,
}

impl<T: Real> Default for TransportModel<T> {
    fn default() -> Self {
        Self::new(T::one(), T::zero(), T::one(), T::one(), T::lit(3.0))
    }
}

impl<T: Real> TransportModel<T> {
    /// Builds the model with the tightest envelopes implied by the chosen forms:
    /// `2^{Lambda-1}(1 + theta^Lambda) <= (1 + theta)^Lambda <= 1 + theta^Lambda`.
    pub fn new(mu0: T, eta0: T, kappa0: T, lambda: T, beta: T) -> Self {
        let lower = T::lit(2.0).powf(lambda - T::one());
        Self {
            mu0,
            eta0,
            kappa0,
            lambda,
            beta,
            mu_lo: mu0 * lower,
            mu_hi: mu0,
            eta_hi: eta0,
            kappa_lo: kappa0,
            kappa_hi: kappa0,
        }
    }

    #[inline]
    pub fn mu(&self, theta: T) -> T {
        self.mu0 * (T::one() + theta).powf(self.lambda)
    }

    #[inline]
    pub fn mu_derivative(&self, theta: T) -> T {
        self.mu0 * self.lambda * (T::one() + theta).powf(self.lambda - T::one())
    }

    #[inline]
    pub fn eta(&self, theta: T) -> T {
        self.eta0 * (T::one() + theta).powf(self.lambda)
    }

    #[inline]
    pub fn eta_derivative(&self, theta: T) -> T {
        self.eta0 * self.lambda * (T::one() + theta).powf(self.lambda - T::one())
    }

    #[inline]
    pub fn kappa(&self, theta: T) -> T {
        self.kappa0 * (T::one() + theta.powf(self.beta))
    }

    #[inline]
    pub fn kappa_derivative(&self, theta: T) -> T {
        if self.beta == T::zero() {
            return T::zero();
        }
        self.kappa0 * self.beta * theta.powf(self.beta - T::one())
    }
}

/// Coefficient of the 1D slab stress, `S_xx = (2 mu (1 - 1/d) + eta) u_x`.
#[inline]
pub fn slab_stress_coefficient<T: Real>(mu: T, eta: T, d_eff: T) -> T {
    T::lit(2.0) * mu * (T::one() - T::one() / d_eff) + eta
}

/// Newtonian stress `mu (grad u + grad u^T - (2/d) div u I) + eta div u I`
/// for a `D x D` velocity gradient, `d` taken as `D`.
pub fn viscous_stress<T: Real, const D: usize>(
    theta: T,
    grad_u: &[[T; D]; D],
    transport: &TransportModel<T>,
) -> [[T; D]; D] {
    let mu = transport.mu(theta);
    let eta = transport.eta(theta);
    let div: T = (0..D).map(|i| grad_u[i][i]).sum();
    let d = T::from_count(D);
    let mut out = [[T::zero(); D]; D];
    for i in 0..D {
        for j in 0..D {
            out[i][j] = mu * (grad_u[i][j] + grad_u[j][i]);
        }
        out[i][i] += (eta - T::lit(2.0) * mu / d) * div;
    }
    out
}

/// Fourier heat flux `q = -kappa(theta) grad theta`.
#[inline]
pub fn heat_flux<T: Real>(theta: T, grad_theta: T, transport: &TransportModel<T>) -> T {
    -transport.kappa(theta) * grad_theta
}

/// `K(theta) = ∫_1^theta kappa(tau)/tau dtau`, adaptive quadrature.
pub fn conductivity_primitive<T: Real>(theta: T, transport: &TransportModel<T>) -> T {
    let f = |tau: T| transport.kappa(tau) / tau;
    // integrate in log variables to tame the 1/tau singularity near zero
    let g = |y: T| {
        let tau = y.exp();
        f(tau) * tau
    };
    adaptive_simpson(&g, T::zero(), theta.ln(), T::rel_tol(1e-13))
}
