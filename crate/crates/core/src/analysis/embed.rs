use serde::Serialize;

use super::AnalysisError;
use crate::regimegen::Annotation;

pub const DEFAULT_WINDOW: usize = 50;

/// Rolling (mean, sample std) of the trailing window ending at `index`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmbeddingPoint {
    pub index: u64,
    pub velocity: f64,
    pub volatility: f64,
    pub state: u32,
    pub in_transition: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateEmbedding {
    pub window: usize,
    pub points: Vec<EmbeddingPoint>,
}

impl StateEmbedding {
    pub fn coordinates(&self) -> Vec<[f64; 2]> {
        self.points.iter().map(|p| [p.velocity, p.volatility]).collect()
    }

    pub fn states(&self) -> Vec<u32> {
        self.points.iter().map(|p| p.state).collect()
    }
}

/// Velocity/volatility points tagged with the state active at each window's
/// last instance.
pub fn embed_states(
    returns: &[f64],
    annotations: &[Annotation],
    window: usize,
) -> Result<StateEmbedding, AnalysisError> {
    if returns.len() != annotations.len() {
        return Err(AnalysisError::LengthMismatch {
            returns: returns.len(),
            annotations: annotations.len(),
        });
    }
    if window < 2 || returns.len() <= window {
        return Err(AnalysisError::Window {
            window,
            len: returns.len(),
        });
    }
    if let Some(index) = returns.iter().position(|v| !v.is_finite()) {
        return Err(AnalysisError::NonFinite {
            what: "embedding",
            index,
        });
    }
    let n = window as f64;
    let points = returns
        .windows(window)
        .enumerate()
        .map(|(i, w)| {
            let end = i + window - 1;
            let a = w[0];
            let offset = w.iter().map(|x| x - a).sum::<f64>() / n;
            let ss: f64 = w.iter().map(|x| (x - a - offset).powi(2)).sum();
            let note = &annotations[end];
            EmbeddingPoint {
                index: end as u64,
                velocity: a + offset,
                volatility: (ss / (n - 1.0)).sqrt(),
                state: note.state,
                in_transition: note.in_transition(),
            }
        })
        .collect();
    Ok(StateEmbedding { window, points })
}
