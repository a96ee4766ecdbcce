use serde::{Deserialize, Serialize};

use super::FeatureError;

pub const DEFAULT_INITIAL_PRICE: f64 = 250.0;

/// Prices compounded from log returns.
#[derive(Debug, Clone, PartialEq)]
pub struct PriceSeries {
    pub initial_price: f64,
    pub prices: Vec<f64>,
}

/// Synthetic bar: opens at the previous close, high and low equal the close.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OhlcBar {
    pub open: f64,
    pub high: f64,
    pub low: f64,
    pub close: f64,
}

/// `P_t = P_{t-1} * exp(r_t)` starting from `initial_price`.
pub fn reconstruct_prices(returns: &[f64], initial_price: f64) -> Result<PriceSeries, FeatureError> {
    if !(initial_price > 0.0 && initial_price.is_finite()) {
        return Err(FeatureError::InvalidInitialPrice(initial_price));
    }
    let mut prices = Vec::with_capacity(returns.len());
    let mut p = initial_price;
    for (index, r) in returns.iter().enumerate() {
        if !r.is_finite() {
            return Err(FeatureError::NonFiniteReturn { index });
        }
        p *= r.exp();
        if !(p > 0.0 && p.is_finite()) {
            return Err(FeatureError::PriceOverflow { index });
        }
        prices.push(p);
    }
    Ok(PriceSeries {
        initial_price,
        prices,
    })
}

pub fn to_ohlc(prices: &PriceSeries) -> Vec<OhlcBar> {
    let mut open = prices.initial_price;
    prices
        .prices
        .iter()
        .map(|&close| {
            let bar = OhlcBar {
                open,
                high: close,
                low: close,
                close,
            };
            open = close;
            bar
        })
        .collect()
}
