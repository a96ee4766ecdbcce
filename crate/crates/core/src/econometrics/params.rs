use std::fmt;

use serde::{Deserialize, Serialize};

use super::EconError;

/// Conditional-mean parameters of an ARMA(p, q) process on returns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmaParams {
    pub mu: f64,
    /// AR coefficients, `phi[i]` multiplies the return at lag `i + 1`.
    pub phi: Vec<f64>,
    /// MA coefficients, `theta[j]` multiplies the residual at lag `j + 1`.
    pub theta: Vec<f64>,
}

/// Conditional-variance parameters of a GARCH(p, q) process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GarchParams {
    pub omega: f64,
    /// ARCH coefficients on lagged squared residuals.
    pub alpha: Vec<f64>,
    /// GARCH coefficients on lagged conditional variances.
    pub beta: Vec<f64>,
}

impl ArmaParams {
    pub fn new(mu: f64, phi: Vec<f64>, theta: Vec<f64>) -> Self {
        Self { mu, phi, theta }
    }

    pub fn white_noise(mu: f64) -> Self {
        Self::new(mu, Vec::new(), Vec::new())
    }

    pub fn p(&self) -> usize {
        self.phi.len()
    }

    pub fn q(&self) -> usize {
        self.theta.len()
    }
}

impl GarchParams {
    pub fn new(omega: f64, alpha: Vec<f64>, beta: Vec<f64>) -> Self {
        Self { omega, alpha, beta }
    }

    /// Homoskedastic variance `omega`.
    pub fn constant(omega: f64) -> Self {
        Self::new(omega, Vec::new(), Vec::new())
    }

    pub fn persistence(&self) -> f64 {
        self.alpha.iter().sum::<f64>() + self.beta.iter().sum::<f64>()
    }

    /// `omega / (1 - sum(alpha) - sum(beta))`.
    pub fn unconditional_variance(&self) -> f64 {
        self.omega / (1.0 - self.persistence())
    }
}

/// Orders `(p, q, p_garch, q_garch)`; the derived ordering is the
/// lexicographic tie-break used by model selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModelOrders {
    pub p: usize,
    pub q: usize,
    pub p_garch: usize,
    pub q_garch: usize,
}

impl ModelOrders {
    pub fn new(p: usize, q: usize, p_garch: usize, q_garch: usize) -> Self {
        Self {
            p,
            q,
            p_garch,
            q_garch,
        }
    }

    /// Number of estimated parameters: mu, AR, MA, omega, ARCH and GARCH terms.
    pub fn parameter_count(&self) -> usize {
        1 + self.p + self.q + 1 + self.p_garch + self.q_garch
    }

    pub fn max_lag(&self) -> usize {
        self.p.max(self.q).max(self.p_garch).max(self.q_garch)
    }
}

impl fmt::Display for ModelOrders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ARMA({},{})-GARCH({},{})",
            self.p, self.q, self.p_garch, self.q_garch
        )
    }
}

/// Innovation distribution of a generative process.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Innovation {
    #[default]
    Normal,
}

impl fmt::Display for Innovation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Innovation::Normal => f.write_str("normal"),
        }
    }
}

/// One fitted generative process standing for a market state.
#[derive(Debug, Clone, PartialEq)]
pub struct RegimeModel {
    state_id: u32,
    arma: ArmaParams,
    garch: GarchParams,
    innovation: Innovation,
}

impl RegimeModel {
    /// Builds a model, rejecting parameters that violate stationarity or
    /// variance positivity.
    pub fn new(
        state_id: u32,
        arma: ArmaParams,
        garch: GarchParams,
        innovation: Innovation,
    ) -> Result<Self, EconError> {
        let report = validate(&arma, &garch);
        if !report.is_valid() {
            return Err(EconError::InvalidParams(report));
        }
        Ok(Self {
            state_id,
            arma,
            garch,
            innovation,
        })
    }

    pub fn state_id(&self) -> u32 {
        self.state_id
    }

    pub fn arma(&self) -> &ArmaParams {
        &self.arma
    }

    pub fn garch(&self) -> &GarchParams {
        &self.garch
    }

    pub fn innovation(&self) -> Innovation {
        self.innovation
    }

    pub fn orders(&self) -> ModelOrders {
        ModelOrders::new(
            self.arma.p(),
            self.arma.q(),
            self.garch.alpha.len(),
            self.garch.beta.len(),
        )
    }

    pub fn with_state_id(mut self, state_id: u32) -> Self {
        self.state_id = state_id;
        self
    }

    /// Same process with the drift term removed.
    pub fn mean_neutralized(mut self) -> Self {
        self.arma.mu = 0.0;
        self
    }
}

/// A violated parameter invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Violation {
    NonFinite { field: &'static str },
    NonStationaryAr,
    NonPositiveOmega,
    NegativeAlpha { index: usize },
    NegativeBeta { index: usize },
    InfiniteVariance { persistence: f64 },
}

impl Violation {
    pub fn name(&self) -> &'static str {
        match self {
            Violation::NonFinite { .. } => "finiteness",
            Violation::NonStationaryAr => "stationarity",
            Violation::NonPositiveOmega => "omega-positivity",
            Violation::NegativeAlpha { .. } => "alpha-non-negativity",
            Violation::NegativeBeta { .. } => "beta-non-negativity",
            Violation::InfiniteVariance { .. } => "variance-finiteness",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonFinite { field } => write!(f, "{}: {field} is not finite", self.name()),
            Violation::NonStationaryAr => {
                write!(f, "{}: AR polynomial has a root on or inside the unit circle", self.name())
            }
            Violation::NonPositiveOmega => write!(f, "{}: omega must be > 0", self.name()),
            Violation::NegativeAlpha { index } => write!(f, "{}: alpha[{index}] < 0", self.name()),
            Violation::NegativeBeta { index } => write!(f, "{}: beta[{index}] < 0", self.name()),
            Violation::InfiniteVariance { persistence } => write!(
                f,
                "{}: sum(alpha) + sum(beta) = {persistence} is not < 1",
                self.name()
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks every parameter invariant and reports all violations.
pub fn validate(arma: &ArmaParams, garch: &GarchParams) -> ValidationReport {
    let mut violations = Vec::new();
    let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());

    if !arma.mu.is_finite() {
        violations.push(Violation::NonFinite { field: "mu" });
    }
    if !finite(&arma.phi) {
        violations.push(Violation::NonFinite { field: "phi" });
    } else if reflection_coefficients(&arma.phi).is_none() {
        violations.push(Violation::NonStationaryAr);
    }
    if !finite(&arma.theta) {
        violations.push(Violation::NonFinite { field: "theta" });
    }

    if !garch.omega.is_finite() {
        violations.push(Violation::NonFinite { field: "omega" });
    } else if garch.omega <= 0.0 {
        violations.push(Violation::NonPositiveOmega);
    }
    let garch_finite = finite(&garch.alpha) && finite(&garch.beta);
    if !finite(&garch.alpha) {
        violations.push(Violation::NonFinite { field: "alpha" });
    }
    if !finite(&garch.beta) {
        violations.push(Violation::NonFinite { field: "beta" });
    }
    for (index, a) in garch.alpha.iter().enumerate() {
        if *a < 0.0 {
            violations.push(Violation::NegativeAlpha { index });
        }
    }
    for (index, b) in garch.beta.iter().enumerate() {
        if *b < 0.0 {
            violations.push(Violation::NegativeBeta { index });
        }
    }
    if garch_finite {
        let persistence = garch.persistence();
        if persistence >= 1.0 {
            violations.push(Violation::InfiniteVariance { persistence });
        }
    }
    ValidationReport { violations }
}

/// Step-down (Schur-Cohn) recursion: maps AR coefficients to partial
/// autocorrelations. Returns `None` unless every reflection coefficient lies
/// strictly inside (-1, 1), which holds iff all roots of
/// `1 - sum(phi_i z^i)` lie outside the unit circle.
pub fn reflection_coefficients(phi: &[f64]) -> Option<Vec<f64>> {
    let mut a = phi.to_vec();
    let mut reflections = vec![0.0; phi.len()];
    for k in (0..a.len()).rev() {
        let r = a[k];
        if !(r.abs() < 1.0) {
            return None;
        }
        reflections[k] = r;
        let denom = 1.0 - r * r;
        let prev: Vec<f64> = (0..k).map(|j| (a[j] + r * a[k - 1 - j]) / denom).collect();
        a.truncate(k);
        a.copy_from_slice(&prev);
    }
    Some(reflections)
}

/// Durbin-Levinson recursion: maps partial autocorrelations in (-1, 1) to
/// the coefficients of a stationary AR polynomial.
pub fn ar_from_reflection(reflections: &[f64]) -> Vec<f64> {
    let mut a: Vec<f64> = Vec::with_capacity(reflections.len());
    for (k, &r) in reflections.iter().enumerate() {
        let next: Vec<f64> = (0..k).map(|j| a[j] - r * a[k - 1 - j]).collect();
        a.clear();
        a.extend(next);
        a.push(r);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn noise_garch() -> GarchParams {
        GarchParams::constant(1.0)
    }

    #[test]
    fn stationary_ar_is_valid() {
        let report = validate(&ArmaParams::new(0.0, vec![0.5], vec![]), &noise_garch());
        assert!(report.is_valid(), "{report}");
    }

    #[test]
    fn unit_root_is_rejected() {
        let report = validate(&ArmaParams::new(0.0, vec![1.0], vec![]), &noise_garch());
        assert_eq!(report.violations, vec![Violation::NonStationaryAr]);
        assert_eq!(report.violations[0].name(), "stationarity");
    }

    #[test]
    fn explosive_persistence_is_rejected() {
        let report = validate(
            &ArmaParams::white_noise(0.0),
            &GarchParams::new(1e-6, vec![0.5], vec![0.6]),
        );
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].name(), "variance-finiteness");
    }

    #[test]
    fn reports_every_violation() {
        let report = validate(
            &ArmaParams::new(f64::NAN, vec![2.0], vec![]),
            &GarchParams::new(0.0, vec![-0.1], vec![-0.2]),
        );
        let names: Vec<_> = report.violations.iter().map(Violation::name).collect();
        assert_eq!(
            names,
            vec![
                "finiteness",
                "stationarity",
                "omega-positivity",
                "alpha-non-negativity",
                "beta-non-negativity"
            ]
        );
    }

    #[test]
    fn huge_ar_coefficient_never_builds_a_model() {
        let err = RegimeModel::new(
            1,
            ArmaParams::new(0.0, vec![1e6], vec![]),
            noise_garch(),
            Innovation::Normal,
        )
        .unwrap_err();
        assert!(matches!(err, EconError::InvalidParams(_)));
    }

    #[test]
    fn ar2_stationarity_triangle() {
        // AR(2) is stationary iff phi2 + phi1 < 1, phi2 - phi1 < 1, |phi2| < 1.
        assert!(reflection_coefficients(&[0.5, 0.3]).is_some());
        assert!(reflection_coefficients(&[0.5, 0.6]).is_none());
        assert!(reflection_coefficients(&[-0.7, 0.4]).is_none());
        assert!(reflection_coefficients(&[1.5, -0.9]).is_some());
    }

    #[test]
    fn parameter_count_matches_orders() {
        assert_eq!(ModelOrders::new(1, 0, 1, 1).parameter_count(), 5);
        assert_eq!(ModelOrders::new(9, 25, 4, 4).parameter_count(), 44);
    }

    proptest! {
        #[test]
        fn reflection_round_trip(r in prop::collection::vec(-0.99f64..0.99, 0..8)) {
            let phi = ar_from_reflection(&r);
            let back = reflection_coefficients(&phi).expect("stationary by construction");
            for (a, b) in r.iter().zip(&back) {
                prop_assert!((a - b).abs() < 1e-8);
            }
        }
    }
}
