//! Two-step ARMA-GARCH estimation with AIC order selection.
//!
//! For each `(p, q)` the ARMA part is fitted by conditional sum of squares;
//! the GARCH part is then fitted by Gaussian maximum likelihood on the ARMA
//! residuals. Every candidate in the grid is scored with the joint
//! log-likelihood and the lowest AIC wins, ties going to the smaller
//! parameter count and then to the lexicographically smaller orders.
//!
//! Residuals are conditional on the first `p` returns, so a candidate with a
//! smaller AR order would otherwise sum over more observations. All
//! candidates are therefore scored over the same range, starting at the
//! largest AR order in the grid.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::likelihood::{arma_residuals, garch_log_likelihood};
use super::optimizer::{minimize, OptimizerConfig};
use super::params::{ar_from_reflection, validate};
use super::{aic, log_likelihood_after, ArmaParams, EconError, GarchParams, Innovation, ModelOrders, RegimeModel};

/// Keeps transformed reflection coefficients strictly inside the unit
/// interval even when `tanh` saturates.
const MAX_REFLECTION: f64 = 1.0 - 1e-9;

/// Inclusive order range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRange {
    pub min: usize,
    pub max: usize,
}

impl OrderRange {
    pub fn new(min: usize, max: usize) -> Self {
        Self { min, max }
    }

    pub fn is_empty(&self) -> bool {
        self.min > self.max
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<usize> {
        self.min..=self.max
    }
}

impl fmt::Display for OrderRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderGrid {
    pub p: OrderRange,
    pub q: OrderRange,
    pub p_garch: OrderRange,
    pub q_garch: OrderRange,
}

impl Default for OrderGrid {
    fn default() -> Self {
        Self {
            p: OrderRange::new(0, 5),
            q: OrderRange::new(0, 5),
            p_garch: OrderRange::new(1, 3),
            q_garch: OrderRange::new(1, 3),
        }
    }
}

impl OrderGrid {
    /// Same range for both ARMA orders and for both GARCH orders.
    pub fn uniform(arma: OrderRange, garch: OrderRange) -> Self {
        Self {
            p: arma,
            q: arma,
            p_garch: garch,
            q_garch: garch,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty() || self.q.is_empty() || self.p_garch.is_empty() || self.q_garch.is_empty()
    }

    pub fn contains(&self, orders: &ModelOrders) -> bool {
        self.p.iter().contains(&orders.p)
            && self.q.iter().contains(&orders.q)
            && self.p_garch.iter().contains(&orders.p_garch)
            && self.q_garch.iter().contains(&orders.q_garch)
    }

    /// All candidates in lexicographic `(p, q, p_garch, q_garch)` order.
    pub fn candidates(&self) -> Vec<ModelOrders> {
        let mut out = Vec::new();
        for p in self.p.iter() {
            for q in self.q.iter() {
                for pg in self.p_garch.iter() {
                    for qg in self.q_garch.iter() {
                        out.push(ModelOrders::new(p, q, pg, qg));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for OrderGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "p {}, q {}, p_garch {}, q_garch {}",
            self.p, self.q, self.p_garch, self.q_garch
        )
    }
}

/// Outcome of one grid candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateResult {
    pub orders: ModelOrders,
    pub k: usize,
    pub log_likelihood: Option<f64>,
    pub aic: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub arma: Option<ArmaParams>,
    pub garch: Option<GarchParams>,
    pub failure: Option<String>,
}

impl CandidateResult {
    /// Whether the candidate takes part in model selection.
    pub fn is_eligible(&self) -> bool {
        self.converged && self.aic.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Convergence {
    pub converged: bool,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitReport {
    pub model: RegimeModel,
    pub log_likelihood: f64,
    pub k: usize,
    pub aic: f64,
    /// Every evaluated candidate, in grid order.
    pub grid: Vec<CandidateResult>,
    pub convergence: Convergence,
}

impl FitReport {
    pub fn orders(&self) -> ModelOrders {
        self.model.orders()
    }
}

struct ArmaFit {
    params: ArmaParams,
    residuals: Vec<f64>,
    converged: bool,
    iterations: usize,
}

/// Fits every candidate of `grid` to `returns` and keeps the lowest-AIC one.
pub fn fit(
    returns: &[f64],
    grid: &OrderGrid,
    optimizer: &OptimizerConfig,
) -> Result<FitReport, EconError> {
    if grid.is_empty() {
        return Err(EconError::EmptyGrid);
    }
    if returns.len() < optimizer.min_observations {
        return Err(EconError::SeriesTooShort {
            len: returns.len(),
            min: optimizer.min_observations,
        });
    }
    if returns.iter().any(|r| !r.is_finite()) {
        return Err(EconError::LikelihoodOverflow);
    }
    let (mean, variance) = moments(returns);
    if !(variance > 0.0) {
        return Err(EconError::DegenerateInput);
    }

    let arma_orders: Vec<(usize, usize)> = grid
        .p
        .iter()
        .flat_map(|p| grid.q.iter().map(move |q| (p, q)))
        .collect();
    let garch_orders: Vec<(usize, usize)> = grid
        .p_garch
        .iter()
        .flat_map(|p| grid.q_garch.iter().map(move |q| (p, q)))
        .collect();

    let grid_results: Vec<CandidateResult> = arma_orders
        .par_iter()
        .flat_map_iter(|&(p, q)| {
            let arma_fit = fit_arma(returns, p, q, mean, variance, optimizer);
            let results: Vec<CandidateResult> = garch_orders
                .par_iter()
                .map(|&(pg, qg)| {
                    let orders = ModelOrders::new(p, q, pg, qg);
                    let burn_in = grid.p.max - p;
                    score_candidate(returns, orders, burn_in, arma_fit.as_ref(), optimizer)
                })
                .collect();
            results
        })
        .collect();

    let winner = grid_results
        .iter()
        .filter(|c| c.is_eligible())
        .min_by(|a, b| {
            let aa = a.aic.expect("eligible");
            let bb = b.aic.expect("eligible");
            aa.total_cmp(&bb)
                .then(a.k.cmp(&b.k))
                .then(a.orders.cmp(&b.orders))
        })
        .ok_or_else(|| EconError::NoConvergence {
            len: returns.len(),
            grid: grid.to_string(),
        })?;

    let model = RegimeModel::new(
        1,
        winner.arma.clone().expect("eligible"),
        winner.garch.clone().expect("eligible"),
        Innovation::Normal,
    )?;
    Ok(FitReport {
        log_likelihood: winner.log_likelihood.expect("eligible"),
        k: winner.k,
        aic: winner.aic.expect("eligible"),
        convergence: Convergence {
            converged: winner.converged,
            iterations: winner.iterations,
        },
        model,
        grid: grid_results,
    })
}

/// Mean and population variance, accumulated as offsets from the first value
/// so that a constant series has exactly zero variance.
fn moments(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let anchor = xs[0];
    let shift = xs.iter().map(|x| x - anchor).sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - anchor - shift).powi(2)).sum::<f64>() / n;
    (anchor + shift, var)
}

fn score_candidate(
    returns: &[f64],
    orders: ModelOrders,
    burn_in: usize,
    arma_fit: Result<&ArmaFit, &EconError>,
    optimizer: &OptimizerConfig,
) -> CandidateResult {
    let k = orders.parameter_count();
    let failed = |reason: String, iterations: usize| CandidateResult {
        orders,
        k,
        log_likelihood: None,
        aic: None,
        converged: false,
        iterations,
        arma: None,
        garch: None,
        failure: Some(reason),
    };
    if returns.len() <= orders.max_lag() + 1 {
        let err = EconError::InsufficientData {
            len: returns.len(),
            needed: orders.max_lag() + 1,
            orders,
        };
        return failed(err.to_string(), 0);
    }
    let arma_fit = match arma_fit {
        Ok(f) => f,
        Err(e) => return failed(e.to_string(), 0),
    };
    let (garch, garch_converged, garch_iterations) =
        fit_garch(&arma_fit.residuals, orders.p_garch, orders.q_garch, optimizer);
    let iterations = arma_fit.iterations + garch_iterations;
    let report = validate(&arma_fit.params, &garch);
    if !report.is_valid() {
        return failed(report.to_string(), iterations);
    }
    match log_likelihood_after(&arma_fit.params, &garch, returns, burn_in) {
        Ok(ll) => CandidateResult {
            orders,
            k,
            log_likelihood: Some(ll),
            aic: Some(aic(k, ll)),
            converged: arma_fit.converged && garch_converged,
            iterations,
            arma: Some(arma_fit.params.clone()),
            garch: Some(garch),
            failure: None,
        },
        Err(e) => failed(e.to_string(), iterations),
    }
}

fn reflections(u: &[f64]) -> Vec<f64> {
    u.iter().map(|x| MAX_REFLECTION * x.tanh()).collect()
}

fn arma_from_unconstrained(u: &[f64], p: usize, mean: f64, scale: f64) -> ArmaParams {
    let phi = ar_from_reflection(&reflections(&u[1..1 + p]));
    let theta = ar_from_reflection(&reflections(&u[1 + p..]))
        .into_iter()
        .map(|a| -a)
        .collect();
    ArmaParams::new(mean + u[0] * scale, phi, theta)
}

/// Sample partial autocorrelations up to `lag` via Durbin-Levinson.
fn sample_pacf(xs: &[f64], lag: usize) -> Vec<f64> {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let acov: Vec<f64> = (0..=lag)
        .map(|h| {
            (h..n)
                .map(|t| (xs[t] - mean) * (xs[t - h] - mean))
                .sum::<f64>()
                / n as f64
        })
        .collect();
    let mut pacf = Vec::with_capacity(lag);
    let mut phi: Vec<f64> = Vec::new();
    let mut v = acov[0];
    for k in 1..=lag {
        let num = acov[k] - (0..k - 1).map(|j| phi[j] * acov[k - 1 - j]).sum::<f64>();
        let r = if v > 0.0 { (num / v).clamp(-0.95, 0.95) } else { 0.0 };
        let next: Vec<f64> = (0..k - 1).map(|j| phi[j] - r * phi[k - 2 - j]).collect();
        phi = next;
        phi.push(r);
        v *= 1.0 - r * r;
        pacf.push(r);
    }
    pacf
}

fn fit_arma(
    returns: &[f64],
    p: usize,
    q: usize,
    mean: f64,
    variance: f64,
    optimizer: &OptimizerConfig,
) -> Result<ArmaFit, EconError> {
    let n = returns.len();
    let orders = ModelOrders::new(p, q, 0, 0);
    if n <= p.max(q) + 1 {
        return Err(EconError::InsufficientData {
            len: n,
            needed: p.max(q) + 1,
            orders,
        });
    }
    let scale = variance.sqrt();
    let mut x0 = vec![0.0; 1 + p + q];
    for (slot, r) in x0[1..1 + p].iter_mut().zip(sample_pacf(returns, p)) {
        *slot = r.atanh();
    }
    let objective = |u: &[f64]| {
        let params = arma_from_unconstrained(u, p, mean, scale);
        let eps = arma_residuals(&params, returns);
        eps.iter().map(|e| e * e).sum::<f64>() / (scale * scale * eps.len() as f64)
    };
    let found = minimize(objective, &x0, optimizer);
    let params = arma_from_unconstrained(&found.x, p, mean, scale);
    let residuals = arma_residuals(&params, returns);
    if residuals.iter().any(|e| !e.is_finite()) {
        return Err(EconError::LikelihoodOverflow);
    }
    Ok(ArmaFit {
        params,
        residuals,
        converged: found.converged,
        iterations: found.iterations,
    })
}

/// `u[0]` is `ln(omega)`; the remaining `pg + qg` coordinates are logits of
/// the ARCH and GARCH weights against an implicit slack logit of zero, so the
/// weights are positive and sum to less than one.
fn garch_from_unconstrained(u: &[f64], pg: usize) -> GarchParams {
    let max_logit = u[1..].iter().copied().fold(0.0f64, f64::max);
    let slack = (-max_logit).exp();
    let exps: Vec<f64> = u[1..].iter().map(|x| (x - max_logit).exp()).collect();
    let total = slack + exps.iter().sum::<f64>();
    let weights: Vec<f64> = exps.iter().map(|e| e / total).collect();
    GarchParams::new(u[0].exp(), weights[..pg].to_vec(), weights[pg..].to_vec())
}

fn fit_garch(
    residuals: &[f64],
    pg: usize,
    qg: usize,
    optimizer: &OptimizerConfig,
) -> (GarchParams, bool, usize) {
    let second_moment = residuals.iter().map(|e| e * e).sum::<f64>() / residuals.len() as f64;
    let alpha_total = if pg > 0 { 0.1 } else { 0.0 };
    let beta_total = if qg > 0 { 0.8 } else { 0.0 };
    let slack = 1.0 - alpha_total - beta_total;
    let mut x0 = Vec::with_capacity(1 + pg + qg);
    x0.push((second_moment.max(f64::MIN_POSITIVE) * slack).ln());
    x0.extend(std::iter::repeat_n((alpha_total / pg.max(1) as f64 / slack).ln(), pg));
    x0.extend(std::iter::repeat_n((beta_total / qg.max(1) as f64 / slack).ln(), qg));

    let objective = |u: &[f64]| {
        let params = garch_from_unconstrained(u, pg);
        if !(params.omega > 0.0) || params.persistence() >= 1.0 {
            return f64::INFINITY;
        }
        match garch_log_likelihood(&params, residuals) {
            Ok(ll) => -ll,
            Err(_) => f64::INFINITY,
        }
    };
    let found = minimize(objective, &x0, optimizer);
    (
        garch_from_unconstrained(&found.x, pg),
        found.converged,
        found.iterations,
    )
}
