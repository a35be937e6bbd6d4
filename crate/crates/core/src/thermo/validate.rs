//! Sampled checks of the structural hypotheses on the pressure law and the
//! transport coefficients.

use std::fmt;

use crate::real::Real;
use crate::thermo::{EquationOfState, Model, TransportModel};

/// Structural hypotheses imposed on the constitutive relations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// `P(0) = 0`, `P' > 0`.
    PressureMonotone,
    /// `0 < ((5/3) P - P' Z) / Z <= c`.
    PressureDeficitBound,
    /// `P(Z) / Z^{5/3}` non-increasing with positive limit `p_inf`.
    DegenerateLimit,
    /// Growth envelopes of `mu`, `eta`, `kappa` and a bounded `mu'`.
    TransportEnvelope,
    /// `beta > 6`, needed when the wall temperature is not constant.
    StrongConductivityGrowth,
}

impl Hypothesis {
    pub fn label(self) -> &'static str {
        match self {
            Self::PressureMonotone => "pressure-monotone",
            Self::PressureDeficitBound => "pressure-deficit-bound",
            Self::DegenerateLimit => "degenerate-limit",
            Self::TransportEnvelope => "transport-envelope",
            Self::StrongConductivityGrowth => "strong-conductivity-growth",
        }
    }

    pub fn inequality(self) -> &'static str {
        match self {
            Self::PressureMonotone => "P(0) = 0, P'(Z) > 0",
            Self::PressureDeficitBound => "0 < ((5/3)P(Z) - P'(Z)Z)/Z <= c",
            Self::DegenerateLimit => "P(Z)/Z^(5/3) non-increasing, -> p_inf > 0",
            Self::TransportEnvelope => {
                "mu_lo(1+t^L) <= mu <= mu_hi(1+t^L), 0 <= eta <= eta_hi(1+t^L), \
                 kappa_lo(1+t^b) <= kappa <= kappa_hi(1+t^b), |mu'| bounded"
            }
            Self::StrongConductivityGrowth => "beta > 6",
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.label(), self.inequality())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Violation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub hypothesis: Hypothesis,
    pub severity: Severity,
    pub detail: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Violation => "violation",
        };
        write!(f, "{tag}: {}: {}", self.hypothesis, self.detail)
    }
}

/// Outcome of a validation pass, with the constants fitted on the samples.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub findings: Vec<Finding>,
    /// sup of the pressure deficit ratio on the samples
    pub deficit_bound: Option<f64>,
    /// sup of `|mu'|` on the samples
    pub mu_derivative_bound: Option<f64>,
    pub p_infinity: Option<f64>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations().next().is_none()
    }

    pub fn violations(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Violation)
    }

    pub fn warnings(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Warning)
    }

    pub fn violates(&self, h: Hypothesis) -> bool {
        self.violations().any(|f| f.hypothesis == h)
    }

    pub fn warns(&self, h: Hypothesis) -> bool {
        self.warnings().any(|f| f.hypothesis == h)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.findings.extend(other.findings);
        self.deficit_bound = self.deficit_bound.or(other.deficit_bound);
        self.mu_derivative_bound = self.mu_derivative_bound.or(other.mu_derivative_bound);
        self.p_infinity = self.p_infinity.or(other.p_infinity);
    }

    fn push(&mut self, hypothesis: Hypothesis, severity: Severity, detail: String) {
        self.findings.push(Finding { hypothesis, severity, detail });
    }
}

/// Logarithmically spaced samples on `[lo, hi]`.
pub fn log_samples(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

const SAMPLE_COUNT: usize = 241;
const MONOTONE_SLACK: f64 = 1e-12;

pub fn validate_eos<T: Real>(eos: &EquationOfState<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let law = &eos.law;
    let zs = log_samples(1e-6, 1e6, SAMPLE_COUNT);

    let p0 = law.value(T::zero()).as_f64();
    if p0 != 0.0 {
        report.push(Hypothesis::PressureMonotone, Severity::Violation, format!("P(0) = {p0:e}"));
    }
    if let Some(z) = zs.iter().copied().find(|&z| !(law.derivative(T::lit(z)).as_f64() > 0.0)) {
        report.push(Hypothesis::PressureMonotone, Severity::Violation, format!("P'(Z) <= 0 at Z = {z:e}"));
    }
    if !(law.derivative(T::zero()).as_f64() > 0.0) {
        report.push(Hypothesis::PressureMonotone, Severity::Violation, "P'(0) <= 0".into());
    }

    let mut sup = 0.0f64;
    let mut first_bad = None;
    for &z in &zs {
        let r = law.deficit(T::lit(z)).as_f64() / z;
        if !(r > 0.0) || !r.is_finite() {
            first_bad.get_or_insert((z, r));
        }
        sup = sup.max(r);
    }
    if let Some((z, r)) = first_bad {
        report.push(
            Hypothesis::PressureDeficitBound,
            Severity::Violation,
            format!("((5/3)P - P'Z)/Z = {r:e} at Z = {z:e}"),
        );
    } else {
        report.deficit_bound = Some(sup);
    }

    let ratio = |z: f64| law.value(T::lit(z)).as_f64() / z.powf(5.0 / 3.0);
    let mut prev = ratio(zs[0]);
    for &z in &zs[1..] {
        let r = ratio(z);
        if r > prev * (1.0 + MONOTONE_SLACK) {
            report.push(
                Hypothesis::DegenerateLimit,
                Severity::Violation,
                format!("P(Z)/Z^(5/3) increases near Z = {z:e} ({prev:e} -> {r:e})"),
            );
            break;
        }
        prev = r;
    }
    let p_inf = eos.p_infinity().as_f64();
    report.p_infinity = Some(p_inf);
    if !(p_inf > 0.0 && p_inf.is_finite()) {
        report.push(Hypothesis::DegenerateLimit, Severity::Violation, format!("p_inf = {p_inf:e}"));
    }
    report
}

pub fn validate_transport<T: Real>(tr: &TransportModel<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    let lam = tr.lambda.as_f64();
    let beta = tr.beta.as_f64();
    let slack = 1e-12;
    if !(0.5..=1.0).contains(&lam) {
        report.push(
            Hypothesis::TransportEnvelope,
            Severity::Violation,
            format!("viscosity exponent {lam} outside [1/2, 1]"),
        );
    }
    if !(tr.mu_lo.as_f64() > 0.0 && tr.kappa_lo.as_f64() > 0.0) {
        report.push(
            Hypothesis::TransportEnvelope,
            Severity::Violation,
            "lower envelope constants must be positive".into(),
        );
    }
    let mut sup_dmu = 0.0f64;
    for theta in std::iter::once(0.0).chain(log_samples(1e-6, 1e6, SAMPLE_COUNT)) {
        let t = T::lit(theta);
        let g_l = 1.0 + theta.powf(lam);
        let g_b = 1.0 + theta.powf(beta);
        let mu = tr.mu(t).as_f64();
        let eta = tr.eta(t).as_f64();
        let kappa = tr.kappa(t).as_f64();
        sup_dmu = sup_dmu.max(tr.mu_derivative(t).as_f64().abs());
        let checks = [
            ("mu", mu >= tr.mu_lo.as_f64() * g_l * (1.0 - slack) && mu <= tr.mu_hi.as_f64() * g_l * (1.0 + slack)),
            ("eta", eta >= 0.0 && eta <= tr.eta_hi.as_f64() * g_l * (1.0 + slack)),
            (
                "kappa",
                kappa >= tr.kappa_lo.as_f64() * g_b * (1.0 - slack)
                    && kappa <= tr.kappa_hi.as_f64() * g_b * (1.0 + slack),
            ),
        ];
        if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
            report.push(
                Hypothesis::TransportEnvelope,
                Severity::Violation,
                format!("{name} leaves its envelope at theta = {theta:e}"),
            );
            break;
        }
    }
    if sup_dmu.is_finite() {
        report.mu_derivative_bound = Some(sup_dmu);
    } else {
        report.push(Hypothesis::TransportEnvelope, Severity::Violation, "mu' unbounded".into());
    }
    report
}

/// Validates the whole model. `constant_wall_temperature` relaxes the
/// conductivity growth requirement to a warning-free state.
pub fn validate_model<T: Real>(model: &Model<T>, constant_wall_temperature: bool) -> ValidationReport {
    let mut report = validate_eos(&model.eos);
    report.merge(validate_transport(&model.transport));
    let beta = model.transport.beta.as_f64();
    if !constant_wall_temperature && beta <= 6.0 {
        report.push(
            Hypothesis::StrongConductivityGrowth,
            Severity::Warning,
            format!("beta = {beta} with a non-constant wall temperature; beta > 6 is required"),
        );
    }
    if !(model.d_eff.as_f64() >= 1.0) {
        report.push(Hypothesis::TransportEnvelope, Severity::Violation, "d_eff must be >= 1".into());
    }
    report
}
