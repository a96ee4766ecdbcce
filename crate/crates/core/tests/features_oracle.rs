use proteus_core::features::indicators::{self as ind, window_mean, Momentum};
use proteus_core::features::{
    featurize, reconstruct_prices, to_ohlc, IndicatorConfig, FEATURE_COLUMNS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[path = "support/indicator_oracle.rs"]
mod oracle;
use oracle::bars;

fn random_closes(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut p = 100.0;
    (0..n)
        .map(|_| {
            p *= (rng.random::<f64>() - 0.5) * 0.02 + 1.0;
            p
        })
        .collect()
}

#[test]
fn indicators_match_direct_formulas() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..30 {
        let c = random_closes(&mut rng, 60);
        oracle::compare_all(&c, 1e-9).unwrap();
    }
}

#[test]
fn cci_hand_series() {
    let c = [
        10.0, 10.5, 10.2, 10.8, 11.0, 10.7, 10.9, 11.3, 11.1, 11.6, 11.4, 12.0,
    ];
    let s = ind::cci(&bars(&c), 10).unwrap();
    let w = &c[2..12];
    let sm = w.iter().sum::<f64>() / 10.0;
    let d = w.iter().map(|x| (x - sm).abs()).sum::<f64>() / 10.0;
    assert!((s.get(11).unwrap() - (12.0 - sm) / (0.015 * d)).abs() < 1e-9);
}

#[test]
fn sd_is_mean_of_sk_bit_for_bit() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let c = random_closes(&mut rng, 500);
    let (sk, sd) = ind::stochastics(&c, 10, 10).unwrap();
    for t in sd.start..c.len() {
        let w: Vec<f64> = (t - 9..=t).map(|j| sk.get(j).unwrap()).collect();
        let a = w[0];
        let mean = a + w.iter().map(|x| x - a).sum::<f64>() / 10.0;
        assert_eq!(sd.get(t).unwrap().to_bits(), mean.to_bits());
        assert_eq!(window_mean(&w).to_bits(), mean.to_bits());
    }
}

#[test]
fn cumulative_price_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r: Vec<f64> = (0..1000)
        .map(|_| (rng.random::<f64>() - 0.5) * 0.01)
        .collect();
    let p = reconstruct_prices(&r, 250.0).unwrap();
    let expected = 250.0 * r.iter().sum::<f64>().exp();
    assert!((p.prices[999] / expected - 1.0).abs() < 1e-10);
    for (t, bar) in to_ohlc(&p).iter().enumerate() {
        assert_eq!(bar.open, if t == 0 { 250.0 } else { p.prices[t - 1] });
        assert!(bar.high == bar.close && bar.low == bar.close && bar.close > 0.0);
    }
}

#[test]
fn featurize_composes_standalone_indicators() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let r: Vec<f64> = (0..400)
        .map(|_| (rng.random::<f64>() - 0.5) * 0.004)
        .collect();
    let table = featurize(&r, 250.0, &IndicatorConfig::default()).unwrap();
    let p = reconstruct_prices(&r, 250.0).unwrap();
    let c = &p.prices;
    let b = to_ohlc(&p);
    let (sk, sd) = ind::stochastics(c, 10, 10).unwrap();
    let (bu, bl) = ind::bollinger(c, 20, 2.0).unwrap();
    let (au, ad) = ind::aroon(c, 10).unwrap();
    let expected = [
        ind::rsi(c, 10).unwrap(),
        ind::willr(c, 10).unwrap(),
        ind::macd(c, 12, 26, 9).unwrap(),
        ind::cci(&b, 10).unwrap(),
        ind::momentum(Momentum::Mom, c, 10).unwrap(),
        sk,
        sd,
        ind::sma(c, 5).unwrap(),
        ind::sma(c, 10).unwrap(),
        ind::wma(c, 10).unwrap(),
        ind::ema(c, 10).unwrap(),
        ind::trima(c, 10).unwrap(),
        ind::adx(&b, 10).unwrap(),
        bu,
        bl,
        ind::momentum(Momentum::Roc, c, 10).unwrap(),
        ad,
        au,
    ];
    assert_eq!(table.rows.len(), 400 - 35);
    for row in &table.rows {
        let t = row.index as usize;
        for (j, s) in expected.iter().enumerate() {
            assert_eq!(
                row.values[j].to_bits(),
                s.get(t).unwrap().to_bits(),
                "{}",
                FEATURE_COLUMNS[j]
            );
        }
        assert_eq!(row.label, u8::from(c[t] > c[t - 1]));
    }
}

#[test]
fn bounded_columns_on_random_walks() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut r: Vec<f64> = (0..20_000)
        .map(|_| (rng.random::<f64>() - 0.5) * 0.003)
        .collect();
    for x in r.iter_mut().skip(5000).take(300) {
        *x = 0.0;
    }
    let table = featurize(&r, 250.0, &IndicatorConfig::default()).unwrap();
    let col = |name| table.column(name).unwrap();
    for name in ["rsi10", "sk", "sd", "adx10", "aroon_up", "aroon_down"] {
        assert!(
            col(name).iter().all(|v| (0.0..=100.0).contains(v)),
            "{name}"
        );
    }
    assert!(col("willr10").iter().all(|v| (-100.0..=0.0).contains(v)));
    assert!(col("cci10").iter().all(|v| v.abs() <= 333.34));
    for name in ["aroon_up", "aroon_down"] {
        assert!(
            col(name).iter().all(|v| (v / 10.0).fract() == 0.0),
            "{name}"
        );
    }
    let (u, l) = (col("boll_upper"), col("boll_lower"));
    assert!(u.iter().zip(&l).all(|(a, b)| a >= b));
}
