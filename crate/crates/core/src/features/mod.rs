//! Price reconstruction, synthetic bars, technical indicators and labels.

mod featurize;
pub mod indicators;
mod prices;

pub use featurize::{featurize, FeatureRow, FeatureTable, IndicatorConfig, FEATURE_COLUMNS};
pub use indicators::{label_direction, MovingAverage, Momentum, Series};
pub use prices::{reconstruct_prices, to_ohlc, OhlcBar, PriceSeries, DEFAULT_INITIAL_PRICE};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("{indicator}: period must be at least 1")]
    ZeroPeriod { indicator: &'static str },

    #[error("{indicator}: needs at least {needed} values, got {len}")]
    TooShort {
        indicator: &'static str,
        needed: usize,
        len: usize,
    },

    #[error("initial price must be positive and finite, got {0}")]
    InvalidInitialPrice(f64),

    #[error("return at index {index} is not finite")]
    NonFiniteReturn { index: usize },

    #[error("price at index {index} left the positive finite range")]
    PriceOverflow { index: usize },

    #[error("MACD fast period {fast} must be shorter than slow period {slow}")]
    MacdPeriods { fast: usize, slow: usize },

    #[error("column {column}: {source}")]
    Column {
        column: &'static str,
        source: Box<FeatureError>,
    },
}
