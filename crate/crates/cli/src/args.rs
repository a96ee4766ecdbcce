use clap::Args;
use proteus_core::econometrics::OrderRange;
use proteus_core::features::IndicatorConfig;

/// Parses an inclusive `min..max` order range.
pub fn order_range(s: &str) -> Result<OrderRange, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `min..max`, got `{s}`"))?;
    let parse = |x: &str| {
        x.trim()
            .trim_start_matches('=')
            .parse::<usize>()
            .map_err(|_| format!("`{x}` is not a non-negative integer"))
    };
    let range = OrderRange::new(parse(a)?, parse(b)?);
    if range.is_empty() {
        return Err(format!("range `{s}` is empty"));
    }
    Ok(range)
}

#[derive(Debug, Clone, Args)]
pub struct IndicatorArgs {
    /// Lookback of the period-10 indicators.
    #[arg(long, default_value_t = 10)]
    pub period: usize,
    #[arg(long, default_value_t = 5)]
    pub sma_short: usize,
    /// Stochastic %D period.
    #[arg(long, default_value_t = 10)]
    pub stoch_d: usize,
    #[arg(long, default_value_t = 12)]
    pub macd_fast: usize,
    #[arg(long, default_value_t = 26)]
    pub macd_slow: usize,
    #[arg(long, default_value_t = 9)]
    pub macd_signal: usize,
    #[arg(long, default_value_t = 20)]
    pub bollinger_period: usize,
    #[arg(long, default_value_t = 2.0)]
    pub bollinger_k: f64,
}

impl From<&IndicatorArgs> for IndicatorConfig {
    fn from(a: &IndicatorArgs) -> Self {
        IndicatorConfig {
            period: a.period,
            sma_short: a.sma_short,
            stoch_d: a.stoch_d,
            macd_fast: a.macd_fast,
            macd_slow: a.macd_slow,
            macd_signal: a.macd_signal,
            bollinger_period: a.bollinger_period,
            bollinger_k: a.bollinger_k,
        }
    }
}
