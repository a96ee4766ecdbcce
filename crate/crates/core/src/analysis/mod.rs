//! Descriptive statistics, histograms, state embeddings and clustering.

mod describe;
mod embed;
mod kmeans;

pub use describe::{class_balance, describe, describe_column, histogram, ColumnStats, Histogram, StatsTable};
pub use embed::{embed_states, EmbeddingPoint, StateEmbedding, DEFAULT_WINDOW};
pub use kmeans::{kmeans, purity, ClusterResult, KMeansConfig};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("{0}: input is empty")]
    Empty(&'static str),

    #[error("{what}: value at index {index} is not finite")]
    NonFinite { what: &'static str, index: usize },

    #[error("histogram range [{low}, {high}] is inverted or empty")]
    InvertedRange { low: f64, high: f64 },

    #[error("histogram needs at least one bin")]
    ZeroBins,

    #[error("embedding window {window} needs at least 2 and fewer than {len} returns")]
    Window { window: usize, len: usize },

    #[error("{returns} returns but {annotations} ground-truth annotations")]
    LengthMismatch { returns: usize, annotations: usize },

    #[error("k-means needs 1 <= k <= points, got k = {k} with {points} points")]
    ClusterCount { k: usize, points: usize },
}
