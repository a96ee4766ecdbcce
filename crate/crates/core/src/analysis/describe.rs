use serde::Serialize;

use super::AnalysisError;
use crate::features::{FeatureTable, FEATURE_COLUMNS};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnStats {
    pub name: String,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub q25: f64,
    pub q50: f64,
    pub q75: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct StatsTable {
    pub columns: Vec<ColumnStats>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    if lo + 1 >= sorted.len() {
        return sorted[lo];
    }
    sorted[lo] + (h - lo as f64) * (sorted[lo + 1] - sorted[lo])
}

/// Mean, sample standard deviation and linearly interpolated quartiles.
pub fn describe_column(name: &str, values: &[f64]) -> Result<ColumnStats, AnalysisError> {
    if values.is_empty() {
        return Err(AnalysisError::Empty("describe"));
    }
    if let Some(index) = values.iter().position(|v| !v.is_finite()) {
        return Err(AnalysisError::NonFinite {
            what: "describe",
            index,
        });
    }
    let n = values.len() as f64;
    let a = values[0];
    let offset = values.iter().map(|x| x - a).sum::<f64>() / n;
    let mean = a + offset;
    let std = if values.len() < 2 {
        0.0
    } else {
        let ss: f64 = values.iter().map(|x| (x - a - offset).powi(2)).sum();
        (ss / (n - 1.0)).sqrt()
    };
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(ColumnStats {
        name: name.to_string(),
        mean,
        std,
        min: sorted[0],
        q25: quantile(&sorted, 0.25),
        q50: quantile(&sorted, 0.5),
        q75: quantile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    })
}

/// One row per feature column.
pub fn describe(table: &FeatureTable) -> Result<StatsTable, AnalysisError> {
    let columns = FEATURE_COLUMNS
        .iter()
        .map(|name| describe_column(name, &table.column(name).unwrap_or_default()))
        .collect::<Result<_, _>>()?;
    Ok(StatsTable { columns })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Equal-width bins over `[low, high]`; the last bin includes `high` and
/// values outside the range are skipped.
pub fn histogram(values: &[f64], bins: usize, (low, high): (f64, f64)) -> Result<Histogram, AnalysisError> {
    if bins == 0 {
        return Err(AnalysisError::ZeroBins);
    }
    if !(low < high) || !low.is_finite() || !high.is_finite() {
        return Err(AnalysisError::InvertedRange { low, high });
    }
    let width = (high - low) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| low + i as f64 * width).collect();
    edges.push(high);
    let mut counts = vec![0u64; bins];
    for &x in values {
        if !(low..=high).contains(&x) {
            continue;
        }
        let mut i = (((x - low) / width) as usize).min(bins - 1);
        if x < edges[i] {
            i -= 1;
        } else if i + 1 < bins && x >= edges[i + 1] {
            i += 1;
        }
        counts[i] += 1;
    }
    Ok(Histogram { edges, counts })
}

/// Share of label `0`.
pub fn class_balance(labels: &[u8]) -> Result<f64, AnalysisError> {
    if labels.is_empty() {
        return Err(AnalysisError::Empty("class balance"));
    }
    let zeros = labels.iter().filter(|&&l| l == 0).count();
    Ok(zeros as f64 / labels.len() as f64)
}
