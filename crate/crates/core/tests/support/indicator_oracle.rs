//! Direct textbook evaluations of every indicator, used as an oracle.

use proteus_core::features::indicators::{self as ind, Momentum, MovingAverage};
use proteus_core::features::{to_ohlc, OhlcBar, PriceSeries};

pub fn bars(c: &[f64]) -> Vec<OhlcBar> {
    to_ohlc(&PriceSeries {
        initial_price: c[0],
        prices: c.to_vec(),
    })
}

fn sum(w: &[f64]) -> f64 {
    w.iter().sum()
}

fn ema_ref(x: &[f64], n: usize) -> Vec<Option<f64>> {
    let mut out = vec![None; x.len()];
    if x.len() < n {
        return out;
    }
    let a = 2.0 / (n as f64 + 1.0);
    let mut e = sum(&x[..n]) / n as f64;
    out[n - 1] = Some(e);
    for t in n..x.len() {
        e = e + a * (x[t] - e);
        out[t] = Some(e);
    }
    out
}

fn check_series(
    s: &ind::Series,
    expected: impl Fn(usize) -> Option<f64>,
    len: usize,
    tol: f64,
    what: &str,
) -> Result<(), String> {
    for t in 0..len {
        match (s.get(t), expected(t)) {
            (Some(a), Some(b)) if (a - b).abs() <= tol => {}
            (Some(a), Some(b)) => return Err(format!("{what} at {t}: {a} vs {b}")),
            (None, None) => {}
            (a, b) => {
                return Err(format!(
                    "{what} at {t}: defined {} vs {}",
                    a.is_some(),
                    b.is_some()
                ))
            }
        }
    }
    Ok(())
}

/// Compares every indicator on `c` against direct evaluation with
/// absolute tolerance `tol`.
pub fn compare_all(c: &[f64], tol: f64) -> Result<(), String> {
    let b = bars(c);
    let len = c.len();
    let n = 10;

    let s = ind::moving_average(MovingAverage::Sma, c, n).unwrap();
    check_series(
        &s,
        |t| (t + 1 >= n).then(|| sum(&c[t + 1 - n..=t]) / n as f64),
        len,
        tol,
        "sma",
    )?;

    let s = ind::moving_average(MovingAverage::Wma, c, n).unwrap();
    check_series(
        &s,
        |t| {
            (t + 1 >= n).then(|| {
                let num: f64 = (0..n).map(|i| (n - i) as f64 * c[t - i]).sum();
                num / (n * (n + 1) / 2) as f64
            })
        },
        len,
        tol,
        "wma",
    )?;

    let e = ema_ref(c, n);
    check_series(
        &ind::moving_average(MovingAverage::Ema, c, n).unwrap(),
        |t| e[t],
        len,
        tol,
        "ema",
    )?;

    let m = 6;
    check_series(
        &ind::moving_average(MovingAverage::Trima, c, n).unwrap(),
        |t| {
            (t >= 2 * (m - 1)).then(|| {
                (0..m)
                    .map(|j| sum(&c[t - j + 1 - m..=t - j]) / m as f64)
                    .sum::<f64>()
                    / m as f64
            })
        },
        len,
        tol,
        "trima",
    )?;

    check_series(
        &ind::momentum(Momentum::Mom, c, n).unwrap(),
        |t| (t >= n).then(|| c[t] - c[t - n]),
        len,
        tol,
        "mom",
    )?;
    check_series(
        &ind::momentum(Momentum::Roc, c, n).unwrap(),
        |t| (t >= n).then(|| (c[t] / c[t - n] - 1.0) * 100.0),
        len,
        tol,
        "roc",
    )?;

    check_series(
        &ind::rsi(c, n).unwrap(),
        |t| {
            (t >= n).then(|| {
                let up: f64 = (t + 1 - n..=t).map(|i| (c[i] - c[i - 1]).max(0.0)).sum();
                let dw: f64 = (t + 1 - n..=t).map(|i| (c[i - 1] - c[i]).max(0.0)).sum();
                100.0 - 100.0 / (1.0 + up / dw)
            })
        },
        len,
        tol,
        "rsi",
    )?;

    let hh = |t: usize| c[t + 1 - n..=t].iter().cloned().fold(f64::MIN, f64::max);
    let ll = |t: usize| c[t + 1 - n..=t].iter().cloned().fold(f64::MAX, f64::min);
    let (sk, sd) = ind::stochastics(c, n, 10).unwrap();
    check_series(
        &sk,
        |t| (t + 1 >= n).then(|| 100.0 * (c[t] - ll(t)) / (hh(t) - ll(t))),
        len,
        tol,
        "sk",
    )?;
    check_series(
        &sd,
        |t| {
            (t + 2 >= 2 * n).then(|| {
                (t + 1 - n..=t)
                    .map(|j| 100.0 * (c[j] - ll(j)) / (hh(j) - ll(j)))
                    .sum::<f64>()
                    / n as f64
            })
        },
        len,
        tol,
        "sd",
    )?;
    check_series(
        &ind::willr(c, n).unwrap(),
        |t| (t + 1 >= n).then(|| -100.0 * (hh(t) - c[t]) / (hh(t) - ll(t))),
        len,
        tol,
        "willr",
    )?;

    let fast = ema_ref(c, 12);
    let slow = ema_ref(c, 26);
    let df: Vec<f64> = (25..len)
        .map(|t| fast[t].unwrap() - slow[t].unwrap())
        .collect();
    let sig = ema_ref(&df, 9);
    check_series(
        &ind::macd(c, 12, 26, 9).unwrap(),
        |t| if t >= 25 { sig[t - 25] } else { None },
        len,
        tol,
        "macd",
    )?;

    check_series(
        &ind::cci(&b, n).unwrap(),
        |t| {
            (t + 1 >= n).then(|| {
                let sm = sum(&c[t + 1 - n..=t]) / n as f64;
                let d = c[t + 1 - n..=t].iter().map(|m| (m - sm).abs()).sum::<f64>() / n as f64;
                (c[t] - sm) / (0.015 * d)
            })
        },
        len,
        tol,
        "cci",
    )?;

    let bn = 20;
    let (up, lo) = ind::bollinger(c, bn, 2.0).unwrap();
    let band = |t: usize| {
        let w = &c[t + 1 - bn..=t];
        let mu = sum(w) / bn as f64;
        let sd = (w.iter().map(|x| (x - mu) * (x - mu)).sum::<f64>() / bn as f64).sqrt();
        (mu, sd)
    };
    check_series(
        &up,
        |t| (t + 1 >= bn).then(|| band(t).0 + 2.0 * band(t).1),
        len,
        tol,
        "upper",
    )?;
    check_series(
        &lo,
        |t| (t + 1 >= bn).then(|| band(t).0 - 2.0 * band(t).1),
        len,
        tol,
        "lower",
    )?;

    let (au, ad) = ind::aroon(c, n).unwrap();
    let since = |t: usize, pick: fn(f64, f64) -> f64| {
        let w = &c[t - n..=t];
        let target = w.iter().cloned().reduce(pick).unwrap();
        (0..=n).find(|&back| c[t - back] == target).unwrap()
    };
    check_series(
        &au,
        |t| (t >= n).then(|| 100.0 * (n - since(t, f64::max)) as f64 / n as f64),
        len,
        tol,
        "aroon_up",
    )?;
    check_series(
        &ad,
        |t| (t >= n).then(|| 100.0 * (n - since(t, f64::min)) as f64 / n as f64),
        len,
        tol,
        "aroon_down",
    )?;

    let (mut tr, mut pdm, mut mdm) = (vec![0.0; len], vec![0.0; len], vec![0.0; len]);
    for t in 1..len {
        let d = c[t] - c[t - 1];
        tr[t] = d.abs();
        pdm[t] = d.max(0.0);
        mdm[t] = (-d).max(0.0);
    }
    let wilder = |x: &[f64]| {
        let mut s = vec![f64::NAN; len];
        s[n] = sum(&x[1..=n]);
        for t in n + 1..len {
            s[t] = s[t - 1] - s[t - 1] / n as f64 + x[t];
        }
        s
    };
    let (str_, sp, sm) = (wilder(&tr), wilder(&pdm), wilder(&mdm));
    let dx: Vec<f64> = (0..len)
        .map(|t| {
            if t < n {
                return f64::NAN;
            }
            let (p, m) = (100.0 * sp[t] / str_[t], 100.0 * sm[t] / str_[t]);
            100.0 * (p - m).abs() / (p + m)
        })
        .collect();
    let mut adx = vec![None; len];
    let mut a = sum(&dx[n..2 * n]) / n as f64;
    adx[2 * n - 1] = Some(a);
    for t in 2 * n..len {
        a = (a * (n as f64 - 1.0) + dx[t]) / n as f64;
        adx[t] = Some(a);
    }
    check_series(&ind::adx(&b, n).unwrap(), |t| adx[t], len, tol, "adx")?;
    Ok(())
}
