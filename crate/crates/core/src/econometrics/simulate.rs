use std::collections::VecDeque;

use super::{EconError, RegimeModel};

/// Fixed-capacity history where `lag(1)` is the most recent value. Lags
/// beyond the stored history read as zero.
#[derive(Debug, Clone, PartialEq)]
pub struct LagBuffer {
    values: VecDeque<f64>,
    capacity: usize,
}

impl LagBuffer {
    pub fn new(capacity: usize) -> Self {
        Self {
            values: VecDeque::with_capacity(capacity + 1),
            capacity,
        }
    }

    /// A full buffer holding `fill` at every lag.
    pub fn filled(capacity: usize, fill: f64) -> Self {
        let mut buf = Self::new(capacity);
        buf.values.extend(std::iter::repeat_n(fill, capacity));
        buf
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn push(&mut self, value: f64) {
        if self.capacity == 0 {
            return;
        }
        self.values.push_front(value);
        if self.values.len() > self.capacity {
            self.values.pop_back();
        }
    }

    /// Value `lag` steps back, `lag >= 1`.
    #[inline]
    pub fn lag(&self, lag: usize) -> f64 {
        debug_assert!(lag >= 1);
        self.values.get(lag - 1).copied().unwrap_or(0.0)
    }
}

/// Per-model recursion state: the model's own residual and conditional
/// variance histories.
#[derive(Debug, Clone, PartialEq)]
pub struct RecursionState {
    residuals: LagBuffer,
    variances: LagBuffer,
    steps: u64,
}

impl RecursionState {
    /// Zero pre-sample residuals and variances at the unconditional level.
    pub fn new(model: &RegimeModel) -> Self {
        let orders = model.orders();
        Self {
            residuals: LagBuffer::filled(orders.q.max(orders.p_garch), 0.0),
            variances: LagBuffer::filled(
                orders.q_garch,
                model.garch().unconditional_variance(),
            ),
            steps: 0,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    fn fits(&self, model: &RegimeModel) -> bool {
        let orders = model.orders();
        self.residuals.capacity() == orders.q.max(orders.p_garch)
            && self.variances.capacity() == orders.q_garch
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutput {
    pub conditional_mean: f64,
    pub sigma: f64,
    pub value: f64,
}

/// Advances `model` by one step.
///
/// The variance comes from the model's own residual/variance history, the
/// mean from `mu`, AR terms over `ar_input` and MA terms over the model's own
/// residuals. `ar_input` is the history the AR terms read, which during
/// regime simulation is the shared emitted return series.
pub fn step(
    model: &RegimeModel,
    state: &mut RecursionState,
    ar_input: &LagBuffer,
    z: f64,
) -> Result<StepOutput, EconError> {
    if !state.fits(model) {
        return Err(EconError::StateMismatch(model.orders()));
    }
    let garch = model.garch();
    let arma = model.arma();

    let mut variance = garch.omega;
    for (i, a) in garch.alpha.iter().enumerate() {
        let e = state.residuals.lag(i + 1);
        variance += a * e * e;
    }
    for (j, b) in garch.beta.iter().enumerate() {
        variance += b * state.variances.lag(j + 1);
    }
    if !variance.is_finite() || variance <= 0.0 {
        return Err(EconError::VarianceExplosion {
            step: state.steps,
            variance,
        });
    }

    let mut mean = arma.mu;
    for (i, phi) in arma.phi.iter().enumerate() {
        mean += phi * ar_input.lag(i + 1);
    }
    for (j, theta) in arma.theta.iter().enumerate() {
        mean += theta * state.residuals.lag(j + 1);
    }

    let sigma = variance.sqrt();
    let value = mean + sigma * z;
    state.residuals.push(value - mean);
    state.variances.push(variance);
    state.steps += 1;
    Ok(StepOutput {
        conditional_mean: mean,
        sigma,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econometrics::{ArmaParams, GarchParams, Innovation};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use crate::rng::standard_normal;

    fn model(arma: ArmaParams, garch: GarchParams) -> RegimeModel {
        RegimeModel::new(1, arma, garch, Innovation::Normal).unwrap()
    }

    fn simulate(m: &RegimeModel, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = RecursionState::new(m);
        let mut history = LagBuffer::new(m.orders().p);
        (0..n)
            .map(|_| {
                let out = step(m, &mut state, &history, standard_normal(&mut rng)).unwrap();
                history.push(out.value);
                out.value
            })
            .collect()
    }

    fn variance(xs: &[f64]) -> f64 {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    }

    #[test]
    fn zero_coefficient_step_is_scaled_draw() {
        let m = model(ArmaParams::white_noise(0.0), GarchParams::constant(4.0));
        let mut state = RecursionState::new(&m);
        let out = step(&m, &mut state, &LagBuffer::new(0), 1.5).unwrap();
        assert_eq!(out.value, 3.0);
        assert_eq!(out.sigma, 2.0);
        assert_eq!(state.steps(), 1);
    }

    #[test]
    fn iid_variance_is_omega() {
        let v = 4e-4;
        let m = model(ArmaParams::white_noise(0.0), GarchParams::constant(v));
        let xs = simulate(&m, 100_000, 3);
        assert!((variance(&xs) / v - 1.0).abs() < 0.03);
    }

    #[test]
    fn garch_long_run_variance() {
        let g = GarchParams::new(1e-6, vec![0.10], vec![0.85]);
        let target = g.unconditional_variance();
        let m = model(ArmaParams::white_noise(0.0), g);
        let xs = simulate(&m, 200_000, 5);
        let ratio = variance(&xs) / target;
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn ar1_autocorrelation() {
        let m = model(ArmaParams::new(0.0, vec![0.5], vec![]), GarchParams::constant(1e-4));
        let xs = simulate(&m, 100_000, 9);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let c0: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
        let c1: f64 = xs.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum();
        assert!((c1 / c0 - 0.5).abs() < 0.03);
    }

    #[test]
    fn mismatched_state_is_rejected() {
        let small = model(ArmaParams::white_noise(0.0), GarchParams::constant(1.0));
        let big = model(
            ArmaParams::new(0.0, vec![], vec![0.2, 0.1]),
            GarchParams::new(1.0, vec![0.1], vec![0.1]),
        );
        let mut state = RecursionState::new(&small);
        assert!(matches!(
            step(&big, &mut state, &LagBuffer::new(0), 0.0),
            Err(EconError::StateMismatch(_))
        ));
    }

    #[test]
    fn lag_buffer_order() {
        let mut b = LagBuffer::new(2);
        assert_eq!(b.lag(1), 0.0);
        b.push(1.0);
        b.push(2.0);
        b.push(3.0);
        assert_eq!((b.lag(1), b.lag(2), b.lag(3)), (3.0, 2.0, 0.0));
        assert_eq!(b.len(), 2);
    }
}
