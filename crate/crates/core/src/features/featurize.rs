use serde::{Deserialize, Serialize};

use super::indicators::{self as ind, Momentum, MovingAverage, Series};
use super::{reconstruct_prices, to_ohlc, FeatureError};

pub const FEATURE_COLUMNS: [&str; 18] = [
    "rsi10",
    "willr10",
    "macd",
    "cci10",
    "mom10",
    "sk",
    "sd",
    "sma5",
    "sma10",
    "wma10",
    "ema10",
    "trima10",
    "adx10",
    "boll_upper",
    "boll_lower",
    "roc10",
    "aroon_down",
    "aroon_up",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct IndicatorConfig {
    pub period: usize,
    pub sma_short: usize,
    pub stoch_d: usize,
    pub macd_fast: usize,
    pub macd_slow: usize,
    pub macd_signal: usize,
    pub bollinger_period: usize,
    pub bollinger_k: f64,
}

impl Default for IndicatorConfig {
    fn default() -> Self {
        IndicatorConfig {
            period: 10,
            sma_short: 5,
            stoch_d: 10,
            macd_fast: 12,
            macd_slow: 26,
            macd_signal: 9,
            bollinger_period: 20,
            bollinger_k: 2.0,
        }
    }
}

impl IndicatorConfig {
    /// Rows before this index are dropped; every column is defined from here on.
    pub fn warm_up(&self) -> usize {
        let n = self.period;
        [
            self.macd_slow + self.macd_signal,
            self.bollinger_period,
            2 * n,
            n + self.stoch_d,
            n + 1,
            self.sma_short,
            2,
        ]
        .into_iter()
        .max()
        .unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureRow {
    pub index: u64,
    pub values: [f64; 18],
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureTable {
    pub rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = FEATURE_COLUMNS.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.values[i]).collect())
    }

    pub fn labels(&self) -> Vec<u8> {
        self.rows.iter().map(|r| r.label).collect()
    }
}

fn named<T>(column: &'static str, r: Result<T, FeatureError>) -> Result<T, FeatureError> {
    r.map_err(|e| FeatureError::Column {
        column,
        source: Box::new(e),
    })
}

/// Prices, synthetic bars, the 18 indicator columns and the direction label,
/// keeping only rows at or after the warm-up.
pub fn featurize(
    returns: &[f64],
    initial_price: f64,
    config: &IndicatorConfig,
) -> Result<FeatureTable, FeatureError> {
    let warm_up = config.warm_up();
    if returns.len() <= warm_up {
        return Err(FeatureError::TooShort {
            indicator: "features",
            needed: warm_up + 1,
            len: returns.len(),
        });
    }
    let prices = reconstruct_prices(returns, initial_price)?;
    let bars = to_ohlc(&prices);
    let c = &prices.prices;
    let n = config.period;

    let (sk, sd) = named("sk", ind::stochastics(c, n, config.stoch_d))?;
    let (upper, lower) = named(
        "boll_upper",
        ind::bollinger(c, config.bollinger_period, config.bollinger_k),
    )?;
    let (aroon_up, aroon_down) = named("aroon_up", ind::aroon(c, n))?;
    let columns: [Series; 18] = [
        named("rsi10", ind::rsi(c, n))?,
        named("willr10", ind::willr(c, n))?,
        named(
            "macd",
            ind::macd(c, config.macd_fast, config.macd_slow, config.macd_signal),
        )?,
        named("cci10", ind::cci(&bars, n))?,
        named("mom10", ind::momentum(Momentum::Mom, c, n))?,
        sk,
        sd,
        named("sma5", ind::moving_average(MovingAverage::Sma, c, config.sma_short))?,
        named("sma10", ind::moving_average(MovingAverage::Sma, c, n))?,
        named("wma10", ind::moving_average(MovingAverage::Wma, c, n))?,
        named("ema10", ind::moving_average(MovingAverage::Ema, c, n))?,
        named("trima10", ind::moving_average(MovingAverage::Trima, c, n))?,
        named("adx10", ind::adx(&bars, n))?,
        upper,
        lower,
        named("roc10", ind::momentum(Momentum::Roc, c, n))?,
        aroon_down,
        aroon_up,
    ];
    let labels = ind::label_direction(c);

    let rows = (warm_up..c.len())
        .map(|t| FeatureRow {
            index: t as u64,
            values: std::array::from_fn(|j| {
                columns[j].get(t).expect("column defined after warm-up")
            }),
            label: labels[t - 1],
        })
        .collect();
    Ok(FeatureTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_warm_up() {
        assert_eq!(IndicatorConfig::default().warm_up(), 35);
    }

    #[test]
    fn row_count_and_alignment() {
        let r: Vec<f64> = (0..1000).map(|i| 0.001 * ((i * 7919 % 13) as f64 - 6.0)).collect();
        let t = featurize(&r, 250.0, &IndicatorConfig::default()).unwrap();
        assert_eq!(t.rows.len(), 965);
        assert_eq!(t.rows[0].index, 35);
        assert_eq!(t.rows[0].label, u8::from(r[35] > 0.0));
    }

    #[test]
    fn constant_prices() {
        let t = featurize(&[0.0; 100], 250.0, &IndicatorConfig::default()).unwrap();
        for row in &t.rows {
            for name in ["sma5", "sma10", "wma10", "ema10", "trima10", "boll_upper", "boll_lower"] {
                let i = FEATURE_COLUMNS.iter().position(|c| *c == name).unwrap();
                assert_eq!(row.values[i], 250.0, "{name}");
            }
            for name in ["macd", "mom10", "roc10", "cci10"] {
                let i = FEATURE_COLUMNS.iter().position(|c| *c == name).unwrap();
                assert_eq!(row.values[i], 0.0, "{name}");
            }
            assert_eq!(row.label, 0);
        }
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            featurize(&[0.0; 35], 250.0, &IndicatorConfig::default()),
            Err(FeatureError::TooShort { needed: 36, .. })
        ));
        let cfg = IndicatorConfig {
            period: 0,
            ..Default::default()
        };
        let err = featurize(&[0.0; 100], 250.0, &cfg).unwrap_err();
        assert!(err.to_string().starts_with("column "), "{err}");
    }
}
