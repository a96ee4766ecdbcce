//! Technical indicators over close prices or synthetic bars.
//!
//! Every indicator returns a [`Series`] aligned to its input: `values[0]`
//! belongs to input index `start`. Window means are taken relative to the
//! first value of the window, so a constant input yields the constant back
//! exactly.

use super::{FeatureError, OhlcBar};

/// Indicator output aligned to the input index.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub start: usize,
    pub values: Vec<f64>,
}

impl Series {
    fn empty(start: usize) -> Self {
        Series {
            start,
            values: Vec::new(),
        }
    }

    /// Value at input index `t`, if computed.
    pub fn get(&self, t: usize) -> Option<f64> {
        t.checked_sub(self.start)
            .and_then(|i| self.values.get(i).copied())
    }

    /// Index one past the last computed value.
    pub fn end(&self) -> usize {
        self.start + self.values.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MovingAverage {
    Sma,
    Wma,
    Ema,
    Trima,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Momentum {
    Mom,
    Roc,
}

/// Mean of `w`, accumulated as offsets from `w[0]`.
pub fn window_mean(w: &[f64]) -> f64 {
    let a = w[0];
    a + w.iter().map(|x| x - a).sum::<f64>() / w.len() as f64
}

fn check(indicator: &'static str, n: usize, len: usize, needed: usize) -> Result<(), FeatureError> {
    if n == 0 {
        return Err(FeatureError::ZeroPeriod { indicator });
    }
    if len < needed {
        return Err(FeatureError::TooShort {
            indicator,
            needed,
            len,
        });
    }
    Ok(())
}

fn rolling(closes: &[f64], n: usize, f: impl Fn(&[f64]) -> f64) -> Series {
    Series {
        start: n - 1,
        values: closes.windows(n).map(f).collect(),
    }
}

fn max_min(w: &[f64]) -> (f64, f64) {
    w.iter()
        .fold((f64::NEG_INFINITY, f64::INFINITY), |(hi, lo), &x| {
            (hi.max(x), lo.min(x))
        })
}

pub fn sma(closes: &[f64], n: usize) -> Result<Series, FeatureError> {
    check("SMA", n, closes.len(), n)?;
    Ok(rolling(closes, n, window_mean))
}

pub fn wma(closes: &[f64], n: usize) -> Result<Series, FeatureError> {
    check("WMA", n, closes.len(), n)?;
    let total = (n * (n + 1) / 2) as f64;
    Ok(rolling(closes, n, |w| {
        let a = w[0];
        let s: f64 = w
            .iter()
            .enumerate()
            .map(|(i, x)| (i + 1) as f64 * (x - a))
            .sum();
        a + s / total
    }))
}

/// EMA with `alpha = 2 / (n + 1)`, seeded by the SMA of the first `n` values.
pub fn ema(closes: &[f64], n: usize) -> Result<Series, FeatureError> {
    check("EMA", n, closes.len(), n)?;
    let alpha = 2.0 / (n as f64 + 1.0);
    let mut e = window_mean(&closes[..n]);
    let mut values = Vec::with_capacity(closes.len() - n + 1);
    values.push(e);
    for &c in &closes[n..] {
        e += alpha * (c - e);
        values.push(e);
    }
    Ok(Series {
        start: n - 1,
        values,
    })
}

/// SMA of an SMA, each over `ceil((n + 1) / 2)` values.
pub fn trima(closes: &[f64], n: usize) -> Result<Series, FeatureError> {
    let m = (n + 2) / 2;
    check("TRIMA", n, closes.len(), 2 * m - 1)?;
    let inner = rolling(closes, m, window_mean);
    let outer = rolling(&inner.values, m, window_mean);
    Ok(Series {
        start: inner.start + outer.start,
        values: outer.values,
    })
}

pub fn moving_average(kind: MovingAverage, closes: &[f64], n: usize) -> Result<Series, FeatureError> {
    match kind {
        MovingAverage::Sma => sma(closes, n),
        MovingAverage::Wma => wma(closes, n),
        MovingAverage::Ema => ema(closes, n),
        MovingAverage::Trima => trima(closes, n),
    }
}

/// `C_t - C_{t-n}` or its percent change.
pub fn momentum(kind: Momentum, closes: &[f64], n: usize) -> Result<Series, FeatureError> {
    let name = match kind {
        Momentum::Mom => "MOM",
        Momentum::Roc => "ROC",
    };
    check(name, n, closes.len(), n + 1)?;
    let values = closes[n..]
        .iter()
        .zip(closes)
        .map(|(&c, &prev)| match kind {
            Momentum::Mom => c - prev,
            Momentum::Roc => 100.0 * (c - prev) / prev,
        })
        .collect();
    Ok(Series { start: n, values })
}

pub fn rsi(closes: &[f64], n: usize) -> Result<Series, FeatureError> {
    check("RSI", n, closes.len(), n + 1)?;
    let values = closes
        .windows(n + 1)
        .map(|w| {
            let (mut up, mut down) = (0.0, 0.0);
            for pair in w.windows(2) {
                let d = pair[1] - pair[0];
                if d > 0.0 {
                    up += d;
                } else {
                    down -= d;
                }
            }
            if up == 0.0 && down == 0.0 {
                50.0
            } else if down == 0.0 {
                100.0
            } else {
                100.0 - 100.0 / (1.0 + (up / n as f64) / (down / n as f64))
            }
        })
        .collect();
    Ok(Series { start: n, values })
}

/// Stochastic %K over the last `n` closes and %D as the mean of the last
/// `d` %K values.
pub fn stochastics(closes: &[f64], n: usize, d: usize) -> Result<(Series, Series), FeatureError> {
    check("SK", n, closes.len(), n)?;
    check("SD", d, closes.len(), n + d - 1)?;
    let sk = rolling(closes, n, |w| {
        let (hi, lo) = max_min(w);
        if hi == lo {
            50.0
        } else {
            100.0 * ((w[n - 1] - lo) / (hi - lo))
        }
    });
    let sd = rolling(&sk.values, d, window_mean);
    let sd = Series {
        start: sk.start + sd.start,
        values: sd.values,
    };
    Ok((sk, sd))
}

/// Williams %R on the `[-100, 0]` scale.
pub fn willr(closes: &[f64], n: usize) -> Result<Series, FeatureError> {
    check("WILLR", n, closes.len(), n)?;
    Ok(rolling(closes, n, |w| {
        let (hi, lo) = max_min(w);
        if hi == lo {
            -50.0
        } else {
            -100.0 * ((hi - w[n - 1]) / (hi - lo))
        }
    }))
}

/// EMA(`signal`) of `EMA(fast) - EMA(slow)`.
pub fn macd(closes: &[f64], fast: usize, slow: usize, signal: usize) -> Result<Series, FeatureError> {
    if fast >= slow {
        return Err(FeatureError::MacdPeriods { fast, slow });
    }
    check("MACD", fast.min(signal), closes.len(), slow + signal - 1)?;
    let f = ema(closes, fast)?;
    let s = ema(closes, slow)?;
    let diff: Vec<f64> = (s.start..closes.len())
        .map(|t| f.get(t).unwrap() - s.get(t).unwrap())
        .collect();
    let m = ema(&diff, signal)?;
    Ok(Series {
        start: s.start + m.start,
        values: m.values,
    })
}

pub fn cci(bars: &[OhlcBar], n: usize) -> Result<Series, FeatureError> {
    check("CCI", n, bars.len(), n)?;
    let typical: Vec<f64> = bars
        .iter()
        .map(|b| (b.high + b.low + b.close) / 3.0)
        .collect();
    Ok(rolling(&typical, n, |w| {
        let sm = window_mean(w);
        let dev = w.iter().map(|m| (m - sm).abs()).sum::<f64>() / n as f64;
        if dev == 0.0 {
            0.0
        } else {
            (w[n - 1] - sm) / (0.015 * dev)
        }
    }))
}

/// Wilder's average directional index.
pub fn adx(bars: &[OhlcBar], n: usize) -> Result<Series, FeatureError> {
    check("ADX", n, bars.len(), 2 * n)?;
    let nf = n as f64;
    let mut tr = 0.0;
    let mut plus = 0.0;
    let mut minus = 0.0;
    let mut dx = Vec::with_capacity(bars.len() - n);
    for t in 1..bars.len() {
        let (cur, prev) = (&bars[t], &bars[t - 1]);
        let range = (cur.high - cur.low)
            .max((cur.high - prev.close).abs())
            .max((cur.low - prev.close).abs());
        let up = cur.high - prev.high;
        let down = prev.low - cur.low;
        let pdm = if up > down && up > 0.0 { up } else { 0.0 };
        let mdm = if down > up && down > 0.0 { down } else { 0.0 };
        if t <= n {
            tr += range;
            plus += pdm;
            minus += mdm;
        } else {
            tr += range - tr / nf;
            plus += pdm - plus / nf;
            minus += mdm - minus / nf;
        }
        if t >= n {
            let (pdi, mdi) = if tr == 0.0 {
                (0.0, 0.0)
            } else {
                (100.0 * (plus / tr), 100.0 * (minus / tr))
            };
            let sum = pdi + mdi;
            dx.push(if sum == 0.0 { 0.0 } else { 100.0 * ((pdi - mdi).abs() / sum) });
        }
    }
    let mut a = dx[..n].iter().sum::<f64>() / nf;
    let mut values = Vec::with_capacity(dx.len() - n + 1);
    values.push(a);
    for &x in &dx[n..] {
        a = (a * (nf - 1.0) + x) / nf;
        values.push(a);
    }
    Ok(Series {
        start: 2 * n - 1,
        values,
    })
}

/// Upper and lower bands at `k` population standard deviations around the SMA.
pub fn bollinger(closes: &[f64], n: usize, k: f64) -> Result<(Series, Series), FeatureError> {
    check("Bollinger", n, closes.len(), n)?;
    let (upper, lower) = closes
        .windows(n)
        .map(|w| {
            let mean = window_mean(w);
            let var = w.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
            let band = k * var.sqrt();
            (mean + band, mean - band)
        })
        .unzip();
    Ok((
        Series {
            start: n - 1,
            values: upper,
        },
        Series {
            start: n - 1,
            values: lower,
        },
    ))
}

/// Aroon up and down over `n + 1` closes; ties go to the most recent extreme.
pub fn aroon(closes: &[f64], n: usize) -> Result<(Series, Series), FeatureError> {
    check("Aroon", n, closes.len(), n + 1)?;
    let mut up = Series::empty(n);
    let mut down = Series::empty(n);
    for w in closes.windows(n + 1) {
        let (mut hi, mut lo) = (0, 0);
        for (i, &x) in w.iter().enumerate() {
            if x >= w[hi] {
                hi = i;
            }
            if x <= w[lo] {
                lo = i;
            }
        }
        up.values.push(100.0 * hi as f64 / n as f64);
        down.values.push(100.0 * lo as f64 / n as f64);
    }
    Ok((up, down))
}

/// `1` where the close rose from the previous step, for `t >= 1`.
pub fn label_direction(closes: &[f64]) -> Vec<u8> {
    closes.windows(2).map(|w| u8::from(w[1] > w[0])).collect()
}
