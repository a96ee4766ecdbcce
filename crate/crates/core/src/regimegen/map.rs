use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::MapError;
use crate::rng::{substream, LABEL_MAP};

/// One scheduled drift from `from_state` to `to_state`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionEvent {
    pub start_index: u64,
    pub duration: u64,
    pub from_state: u32,
    pub to_state: u32,
}

impl TransitionEvent {
    pub fn end(&self) -> u64 {
        self.start_index + self.duration
    }

    pub fn contains(&self, t: u64) -> bool {
        t >= self.start_index && t < self.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DriftKind {
    Abrupt,
    Gradual,
}

impl DriftKind {
    /// Classifies a duration by whichever configured duration it is closer
    /// to on a log scale.
    pub fn classify(duration: u64, abrupt: u64, gradual: u64) -> Self {
        let cut = ((abrupt.max(1) as f64) * (gradual.max(1) as f64)).sqrt();
        if (duration as f64) < cut {
            DriftKind::Abrupt
        } else {
            DriftKind::Gradual
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            DriftKind::Abrupt => "abrupt",
            DriftKind::Gradual => "gradual",
        }
    }
}

/// A validated, chain-consistent schedule of drift events.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransitionMap {
    events: Vec<TransitionEvent>,
    initial_state: u32,
    stream_length: u64,
}

impl TransitionMap {
    /// Validates ordering, non-overlap, chain consistency and bounds. Error
    /// rows are 1-based event positions.
    pub fn new(
        events: Vec<TransitionEvent>,
        initial_state: u32,
        stream_length: u64,
    ) -> Result<Self, MapError> {
        let mut active = initial_state;
        let mut previous_end = 0;
        for (i, e) in events.iter().enumerate() {
            let row = i + 1;
            if e.from_state == e.to_state {
                return Err(MapError::SelfTransition {
                    row,
                    state: e.from_state,
                });
            }
            if e.duration == 0 {
                return Err(MapError::ZeroDuration { row });
            }
            if i > 0 && e.start_index < previous_end {
                return Err(MapError::Overlap {
                    row,
                    start: e.start_index,
                    previous_end,
                });
            }
            if e.end() > stream_length {
                return Err(MapError::PastEnd {
                    row,
                    end: e.end(),
                    length: stream_length,
                });
            }
            if e.from_state != active {
                return Err(MapError::ChainBreak {
                    row,
                    expected: active,
                    found: e.from_state,
                });
            }
            active = e.to_state;
            previous_end = e.end();
        }
        Ok(Self {
            events,
            initial_state,
            stream_length,
        })
    }

    /// Additionally requires every state id to lie in `1..=n_states`.
    pub fn with_state_bound(self, n_states: u32) -> Result<Self, MapError> {
        let check = |row: usize, state: u32| {
            if state == 0 || state > n_states {
                Err(MapError::StateOutOfRange {
                    row,
                    state,
                    n_states,
                })
            } else {
                Ok(())
            }
        };
        check(0, self.initial_state)?;
        for (i, e) in self.events.iter().enumerate() {
            check(i + 1, e.from_state)?;
            check(i + 1, e.to_state)?;
        }
        Ok(self)
    }

    pub fn events(&self) -> &[TransitionEvent] {
        &self.events
    }

    pub fn initial_state(&self) -> u32 {
        self.initial_state
    }

    pub fn stream_length(&self) -> u64 {
        self.stream_length
    }

    /// Distinct state ids referenced by the map, ascending.
    pub fn states(&self) -> Vec<u32> {
        let mut s: Vec<u32> = std::iter::once(self.initial_state)
            .chain(self.events.iter().flat_map(|e| [e.from_state, e.to_state]))
            .collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    /// A copy with event `index` given a different duration.
    pub fn with_duration(&self, index: usize, duration: u64) -> Result<Self, MapError> {
        let mut events = self.events.clone();
        events[index].duration = duration;
        Self::new(events, self.initial_state, self.stream_length)
    }
}

/// Parameters of the uniform-interval drift schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StreamConfig {
    pub length: u64,
    /// Instances between consecutive drift starts.
    pub interval: u64,
    pub seed: u64,
    pub gradual_duration: u64,
    pub abrupt_duration: u64,
    pub initial_state: u32,
}

impl Default for StreamConfig {
    fn default() -> Self {
        Self {
            length: 1_500_000,
            interval: 5_000,
            seed: 0,
            gradual_duration: 1_000,
            abrupt_duration: 100,
            initial_state: 1,
        }
    }
}

impl StreamConfig {
    pub fn validate(&self) -> Result<(), MapError> {
        if self.interval <= self.gradual_duration {
            return Err(MapError::Config(format!(
                "interval {} must exceed the gradual duration {}",
                self.interval, self.gradual_duration
            )));
        }
        if self.abrupt_duration == 0 || self.gradual_duration == 0 {
            return Err(MapError::Config("drift durations must be at least 1".into()));
        }
        if self.length == 0 {
            return Err(MapError::Config("stream length must be positive".into()));
        }
        Ok(())
    }

    /// Non-fatal remarks about the configuration.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.interval > 0 && self.length % self.interval != 0 {
            out.push(format!(
                "stream length {} is not a multiple of the interval {}",
                self.length, self.interval
            ));
        }
        out
    }

    pub fn kind_of(&self, duration: u64) -> DriftKind {
        DriftKind::classify(duration, self.abrupt_duration, self.gradual_duration)
    }
}

/// Draws a random chain of drifts, one per interval boundary.
///
/// Event `k` starts at `k * interval` for `k = 1..=length / interval`; when
/// the final event would run past the end it is moved back to end exactly at
/// `length`. Target states are uniform over the states other than the active
/// one, and abrupt and gradual durations are shuffled so their counts differ
/// by at most one.
pub fn generate_map(config: &StreamConfig, n_states: u32) -> Result<TransitionMap, MapError> {
    config.validate()?;
    if n_states < 2 {
        return Err(MapError::Config(format!(
            "need at least 2 states, got {n_states}"
        )));
    }
    if config.initial_state == 0 || config.initial_state > n_states {
        return Err(MapError::StateOutOfRange {
            row: 0,
            state: config.initial_state,
            n_states,
        });
    }

    let mut rng = substream(config.seed, LABEL_MAP);
    let n_events = (config.length / config.interval) as usize;
    let mut n_abrupt = n_events / 2;
    if n_events % 2 == 1 && rng.random_bool(0.5) {
        n_abrupt += 1;
    }
    let mut durations: Vec<u64> = (0..n_events)
        .map(|i| {
            if i < n_abrupt {
                config.abrupt_duration
            } else {
                config.gradual_duration
            }
        })
        .collect();
    durations.shuffle(&mut rng);

    let mut events = Vec::with_capacity(n_events);
    let mut active = config.initial_state;
    for (k, duration) in durations.into_iter().enumerate() {
        let mut to = rng.random_range(1..n_states);
        if to >= active {
            to += 1;
        }
        let start = ((k as u64 + 1) * config.interval).min(config.length - duration);
        events.push(TransitionEvent {
            start_index: start,
            duration,
            from_state: active,
            to_state: to,
        });
        active = to;
    }
    TransitionMap::new(events, config.initial_state, config.length)
        .map_err(|e| MapError::Config(format!("generated schedule does not fit: {e}")))
}

/// Logistic blend weight of the incoming process at instance `t`.
///
/// Inside `[start, start + duration)` the weight is
/// `1 / (1 + exp(-(10 / duration) * (t - start - duration / 2)))`; it is
/// exactly 0 before the window and exactly 1 from its end onwards.
pub fn sigmoid_weight(t: u64, start: u64, duration: u64) -> f64 {
    if t < start {
        return 0.0;
    }
    if t >= start + duration {
        return 1.0;
    }
    let d = duration as f64;
    let x = (t - start) as f64 - d / 2.0;
    1.0 / (1.0 + (-(10.0 / d) * x).exp())
}
