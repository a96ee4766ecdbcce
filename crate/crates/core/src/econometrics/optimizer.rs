//! Derivative-free Nelder-Mead simplex minimization with restarts.
//!
//! Constraints are handled by the callers through parameter transforms, so
//! the search itself is unconstrained. Objectives may return `+inf` (or NaN)
//! for points they reject; such vertices simply rank last.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    /// Iteration budget of a single simplex run.
    pub max_iterations: usize,
    /// Relative spread of objective values across the simplex at which a run
    /// is considered converged.
    pub relative_tolerance: f64,
    /// Edge length of the initial simplex, in transformed coordinates.
    pub initial_step: f64,
    /// Fresh simplex runs started from the incumbent after the first run.
    pub max_restarts: usize,
    /// Shortest series the fitter accepts.
    pub min_observations: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 2_000,
            relative_tolerance: 1e-8,
            initial_step: 0.25,
            max_restarts: 3,
            min_observations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn score(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimizes `f` starting from `x0`.
///
/// After the first run converges the search restarts from the incumbent with
/// a fresh simplex; restarts continue while they still improve the objective
/// by more than the tolerance, or while a run ends without converging.
pub fn minimize<F>(f: F, x0: &[f64], config: &OptimizerConfig) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    if x0.is_empty() {
        return Minimum {
            x: Vec::new(),
            value: score(f(&[])),
            iterations: 0,
            converged: true,
        };
    }
    let mut best = run(&f, x0, config);
    let mut iterations = best.iterations;
    for _ in 0..config.max_restarts {
        let next = run(&f, &best.x, config);
        iterations += next.iterations;
        let improvement = best.value - next.value;
        let threshold = config.relative_tolerance * (best.value.abs() + 1e-12);
        let was_converged = best.converged;
        if next.value <= best.value {
            best = Minimum {
                converged: next.converged,
                ..next
            };
        }
        if was_converged && best.converged && improvement <= threshold {
            break;
        }
    }
    best.iterations = iterations;
    best
}

fn run<F>(f: &F, x0: &[f64], config: &OptimizerConfig) -> Minimum
where
    F: Fn(&[f64]) -> f64,
{
    let n = x0.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), score(f(x0))));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += config.initial_step;
        let v = score(f(&x));
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut converged = false;
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    while iterations < config.max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = simplex[0].1;
        let worst = simplex[n].1;
        if best.is_finite()
            && worst.is_finite()
            && (worst - best).abs() <= config.relative_tolerance * (best.abs() + 1e-12)
        {
            converged = true;
            break;
        }
        iterations += 1;

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |coef: f64, out: &mut Vec<f64>, worst_x: &[f64]| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(worst_x) {
                *o = c + coef * (c - w);
            }
        };

        let worst_x = simplex[n].0.clone();
        along(REFLECT, &mut trial, &worst_x);
        let reflected = score(f(&trial));
        let second_worst = simplex[n - 1].1;

        if reflected < best {
            let reflected_x = trial.clone();
            along(EXPAND, &mut trial, &worst_x);
            let expanded = score(f(&trial));
            simplex[n] = if expanded < reflected {
                (trial.clone(), expanded)
            } else {
                (reflected_x, reflected)
            };
            continue;
        }
        if reflected < second_worst {
            simplex[n] = (trial.clone(), reflected);
            continue;
        }
        // Outside contraction when the reflection beat the worst vertex,
        // inside contraction otherwise.
        let (coef, reference) = if reflected < simplex[n].1 {
            (CONTRACT, reflected)
        } else {
            (-CONTRACT, simplex[n].1)
        };
        along(coef, &mut trial, &worst_x);
        let contracted = score(f(&trial));
        if contracted < reference {
            simplex[n] = (trial.clone(), contracted);
            continue;
        }
        let anchor = simplex[0].0.clone();
        for (x, v) in simplex.iter_mut().skip(1) {
            for (xi, a) in x.iter_mut().zip(&anchor) {
                *xi = a + SHRINK * (*xi - a);
            }
            *v = score(f(x));
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        iterations,
        converged,
    }
}
