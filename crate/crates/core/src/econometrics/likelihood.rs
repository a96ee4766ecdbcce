//! Conditional Gaussian likelihood of ARMA-GARCH models.
//!
//! Residuals are conditional on the first `p` observations with pre-sample
//! residuals set to zero. The variance recursion starts from zero pre-sample
//! shocks and a pre-sample variance equal to the mean squared residual.

use super::{ArmaParams, EconError, GarchParams, ModelOrders};

const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// ARMA residuals `eps_t` for `t in p..n`.
pub fn arma_residuals(arma: &ArmaParams, returns: &[f64]) -> Vec<f64> {
    let p = arma.p();
    let q = arma.q();
    if returns.len() <= p {
        return Vec::new();
    }
    let mut eps = Vec::with_capacity(returns.len() - p);
    for t in p..returns.len() {
        let mut mean = arma.mu;
        for (i, phi) in arma.phi.iter().enumerate() {
            mean += phi * returns[t - 1 - i];
        }
        let produced = eps.len();
        for (j, theta) in arma.theta.iter().enumerate().take(q.min(produced)) {
            mean += theta * eps[produced - 1 - j];
        }
        eps.push(returns[t] - mean);
    }
    eps
}

/// Gaussian GARCH log-likelihood of a residual series.
pub fn garch_log_likelihood(garch: &GarchParams, residuals: &[f64]) -> Result<f64, EconError> {
    garch_filter(garch, residuals, 0)
}

fn garch_filter(garch: &GarchParams, residuals: &[f64], skip: usize) -> Result<f64, EconError> {
    let n = residuals.len();
    let presample = if n == 0 {
        0.0
    } else {
        residuals.iter().map(|e| e * e).sum::<f64>() / n as f64
    };
    let pg = garch.alpha.len();
    let qg = garch.beta.len();
    let mut sigma2 = Vec::with_capacity(n);
    let mut total = 0.0;
    for t in 0..n {
        let mut s2 = garch.omega;
        for i in 0..pg.min(t) {
            let e = residuals[t - 1 - i];
            s2 += garch.alpha[i] * e * e;
        }
        for j in 0..qg {
            s2 += garch.beta[j] * if j < t { sigma2[t - 1 - j] } else { presample };
        }
        sigma2.push(s2);
        if t >= skip {
            let e = residuals[t];
            total += -HALF_LN_2PI - 0.5 * s2.ln() - e * e / (2.0 * s2);
        }
    }
    if total.is_finite() {
        Ok(total)
    } else {
        Err(EconError::LikelihoodOverflow)
    }
}

/// Log-likelihood of `returns` under the joint model.
pub fn log_likelihood(
    arma: &ArmaParams,
    garch: &GarchParams,
    returns: &[f64],
) -> Result<f64, EconError> {
    log_likelihood_after(arma, garch, returns, 0)
}

/// Log-likelihood with the first `burn_in` terms of the usable range left
/// out of the sum. The recursions still run over them.
pub fn log_likelihood_after(
    arma: &ArmaParams,
    garch: &GarchParams,
    returns: &[f64],
    burn_in: usize,
) -> Result<f64, EconError> {
    let orders = ModelOrders::new(arma.p(), arma.q(), garch.alpha.len(), garch.beta.len());
    let needed = orders.max_lag();
    if returns.len() <= needed {
        return Err(EconError::InsufficientData {
            len: returns.len(),
            needed,
            orders,
        });
    }
    let eps = arma_residuals(arma, returns);
    garch_filter(garch, &eps, burn_in)
}

/// Akaike information criterion `2k - 2 ln L`.
pub fn aic(k: usize, log_likelihood: f64) -> f64 {
    2.0 * k as f64 - 2.0 * log_likelihood
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use crate::rng::standard_normal;

    #[test]
    fn aic_arithmetic() {
        assert_eq!(aic(3, 10.0), -14.0);
        assert_eq!(aic(0, 0.0), 0.0);
    }

    #[test]
    fn zero_residuals_give_gaussian_constant() {
        let n = 257;
        let returns = vec![0.003; n];
        let arma = ArmaParams::white_noise(0.003);
        let garch = GarchParams::constant(1.0);
        let ll = log_likelihood(&arma, &garch, &returns).unwrap();
        let expected = n as f64 * (-0.5 * (2.0 * std::f64::consts::PI).ln());
        assert!((ll - expected).abs() < 1e-9 * expected.abs());
    }

    #[test]
    fn white_noise_matches_gaussian_entropy() {
        let v: f64 = 2.5e-5;
        let n = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let returns: Vec<f64> = (0..n)
            .map(|_| v.sqrt() * standard_normal(&mut rng))
            .collect::<Vec<f64>>();
        let ll = log_likelihood(
            &ArmaParams::white_noise(0.0),
            &GarchParams::constant(v),
            &returns,
        )
        .unwrap();
        let per_obs = ll / n as f64;
        let oracle = -0.5 * (2.0 * std::f64::consts::PI).ln() - 0.5 * v.ln() - 0.5;
        assert!(
            ((per_obs - oracle) / oracle).abs() < 0.02,
            "{per_obs} vs {oracle}"
        );
    }

    #[test]
    fn overflow_is_reported_not_panicked() {
        let returns: Vec<f64> = (0..50).map(|i| if i % 2 == 0 { 1e200 } else { -1e200 }).collect();
        let err = log_likelihood(
            &ArmaParams::white_noise(0.0),
            &GarchParams::new(1.0, vec![0.5], vec![0.4]),
            &returns,
        )
        .unwrap_err();
        assert_eq!(err, EconError::LikelihoodOverflow);
    }

    #[test]
    fn too_short_series_is_rejected() {
        let err = log_likelihood(
            &ArmaParams::new(0.0, vec![0.1, 0.1], vec![]),
            &GarchParams::constant(1.0),
            &[0.1, 0.2],
        )
        .unwrap_err();
        assert!(matches!(err, EconError::InsufficientData { needed: 2, .. }));
    }

    #[test]
    fn zero_burn_in_is_identity() {
        let returns: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64 * 1e-3 - 5e-3).collect();
        let arma = ArmaParams::new(1e-4, vec![0.3], vec![0.2]);
        let garch = GarchParams::new(1e-5, vec![0.1], vec![0.8]);
        let a = log_likelihood(&arma, &garch, &returns).unwrap();
        let b = log_likelihood_after(&arma, &garch, &returns, 0).unwrap();
        assert_eq!(a.to_bits(), b.to_bits());
        let c = log_likelihood_after(&arma, &garch, &returns, 10).unwrap();
        assert!(c > a || c < a);
    }
}
