//! Ground-truth transition maps and regime-switching stream simulation.

mod map;
mod simulate;

pub use map::{
    generate_map, sigmoid_weight, DriftKind, StreamConfig, TransitionEvent, TransitionMap,
};
pub use simulate::{
    simulate_batch, simulate_stream, stream_seed, Annotation, GroundTruthLog, SimulatedStream,
    SimulationOptions,
};

use thiserror::Error;

use crate::econometrics::EconError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error("row {row}: from_state and to_state are both {state}")]
    SelfTransition { row: usize, state: u32 },

    #[error("row {row}: duration must be at least 1")]
    ZeroDuration { row: usize },

    #[error("row {row}: event ends at {end}, past the stream length {length}")]
    PastEnd { row: usize, end: u64, length: u64 },

    #[error("row {row}: starts at {start} before the previous event ends at {previous_end}")]
    Overlap {
        row: usize,
        start: u64,
        previous_end: u64,
    },

    #[error("row {row}: chain break, from_state {found} but the active state is {expected}")]
    ChainBreak { row: usize, expected: u32, found: u32 },

    #[error("row {row}: state {state} is outside 1..={n_states}")]
    StateOutOfRange { row: usize, state: u32, n_states: u32 },

    #[error("invalid stream configuration: {0}")]
    Config(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("no model for state {0}")]
    MissingModel(u32),

    #[error("more than one model for state {0}")]
    DuplicateModel(u32),

    #[error("burn-in of state {state} failed: {source}")]
    BurnIn { state: u32, source: EconError },

    #[error("variance explosion at instance {index} in state {state} (transition {from} -> {to:?}): {source}")]
    VarianceExplosion {
        index: u64,
        state: u32,
        from: u32,
        to: Option<u32>,
        source: EconError,
    },

    #[error("stream {stream}: {source}")]
    Stream { stream: usize, source: Box<SimError> },
}
