//! Path-dependent simulation of a regime-switching return stream.
//!
//! Every model advances at every instance. All models read the same emitted
//! return history for their AR terms and keep their own residual and variance
//! histories, so a model entering a transition is already in step with the
//! path. Outside a transition the emitted return is the active model's
//! output; inside one it is `x_from + w * (x_to - x_from)`.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{sigmoid_weight, SimError, TransitionEvent, TransitionMap};
use crate::econometrics::{step, LagBuffer, RecursionState, RegimeModel};
use crate::rng::{mix_seed, standard_normal, substream, LABEL_BURN_IN, LABEL_INNOVATIONS};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationOptions {
    /// Private warm-up steps per model before the stream starts.
    pub burn_in: usize,
    /// Whether all models share one innovation per instance.
    pub shared_innovation: bool,
    /// Zero every model's drift term before simulating.
    pub mean_neutral: bool,
}

impl Default for SimulationOptions {
    fn default() -> Self {
        Self {
            burn_in: 500,
            shared_innovation: true,
            mean_neutral: false,
        }
    }
}

/// Which process generated one instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Annotation {
    /// Active state, or the outgoing state during a transition.
    pub state: u32,
    /// Incoming state during a transition.
    pub to_state: Option<u32>,
    /// Weight of the incoming process; 0 outside transitions.
    pub weight: f64,
}

impl Annotation {
    pub fn in_transition(&self) -> bool {
        self.to_state.is_some()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruthLog {
    pub events: Vec<TransitionEvent>,
    pub annotations: Vec<Annotation>,
}

impl GroundTruthLog {
    /// Annotations implied by a map, without simulating anything.
    pub fn from_map(map: &TransitionMap) -> Self {
        let mut annotations = Vec::with_capacity(map.stream_length() as usize);
        let mut cursor = Cursor::new(map);
        for t in 0..map.stream_length() {
            annotations.push(cursor.at(t));
        }
        Self {
            events: map.events().to_vec(),
            annotations,
        }
    }

    /// Reconstructs the drift events from the per-instance annotations.
    pub fn recover_events(&self) -> Vec<TransitionEvent> {
        recover_events(&self.annotations)
    }
}

/// Groups consecutive in-transition annotations with the same `(from, to)`
/// pair into events.
pub(crate) fn recover_events(annotations: &[Annotation]) -> Vec<TransitionEvent> {
    let mut events: Vec<TransitionEvent> = Vec::new();
    for (t, a) in annotations.iter().enumerate() {
        let Some(to) = a.to_state else { continue };
        let t = t as u64;
        match events.last_mut() {
            Some(e) if e.end() == t && e.from_state == a.state && e.to_state == to => {
                e.duration += 1;
            }
            _ => events.push(TransitionEvent {
                start_index: t,
                duration: 1,
                from_state: a.state,
                to_state: to,
            }),
        }
    }
    events
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulatedStream {
    pub seed: u64,
    pub returns: Vec<f64>,
    pub log: GroundTruthLog,
}

/// Walks the event list alongside the instance index.
struct Cursor<'a> {
    events: &'a [TransitionEvent],
    next: usize,
    active: u32,
}

impl<'a> Cursor<'a> {
    fn new(map: &'a TransitionMap) -> Self {
        Self {
            events: map.events(),
            next: 0,
            active: map.initial_state(),
        }
    }

    fn at(&mut self, t: u64) -> Annotation {
        while let Some(e) = self.events.get(self.next) {
            if t < e.start_index {
                break;
            }
            if e.contains(t) {
                return Annotation {
                    state: e.from_state,
                    to_state: Some(e.to_state),
                    weight: sigmoid_weight(t, e.start_index, e.duration),
                };
            }
            self.active = e.to_state;
            self.next += 1;
        }
        Annotation {
            state: self.active,
            to_state: None,
            weight: 0.0,
        }
    }
}

struct Slot {
    model: RegimeModel,
    state: RecursionState,
    rng: Option<ChaCha8Rng>,
}

/// Seed of stream `index` in a batch.
pub fn stream_seed(base_seed: u64, index: usize) -> u64 {
    mix_seed(base_seed, index as u64)
}

/// Simulates one stream following `map`.
pub fn simulate_stream(
    models: &[RegimeModel],
    map: &TransitionMap,
    seed: u64,
    options: &SimulationOptions,
) -> Result<SimulatedStream, SimError> {
    let mut models: Vec<RegimeModel> = models
        .iter()
        .cloned()
        .map(|m| if options.mean_neutral { m.mean_neutralized() } else { m })
        .collect();
    models.sort_by_key(|m| m.state_id());
    for pair in models.windows(2) {
        if pair[0].state_id() == pair[1].state_id() {
            return Err(SimError::DuplicateModel(pair[0].state_id()));
        }
    }
    let slot_of = |id: u32| {
        models
            .binary_search_by_key(&id, |m| m.state_id())
            .map_err(|_| SimError::MissingModel(id))
    };
    for id in map.states() {
        slot_of(id)?;
    }
    let initial = slot_of(map.initial_state())?;

    let max_p = models.iter().map(|m| m.orders().p).max().unwrap_or(0);
    let mut slots = Vec::with_capacity(models.len());
    let mut initial_history = LagBuffer::new(max_p);
    for (i, model) in models.iter().enumerate() {
        let mut state = RecursionState::new(model);
        let mut history = LagBuffer::new(max_p);
        // Identical draws for every model: identical processes warm up to
        // identical states.
        let mut burn_rng = substream(seed, LABEL_BURN_IN);
        for _ in 0..options.burn_in {
            let out = step(model, &mut state, &history, standard_normal(&mut burn_rng))
                .map_err(|source| SimError::BurnIn {
                    state: model.state_id(),
                    source,
                })?;
            history.push(out.value);
        }
        if i == initial {
            initial_history = history;
        }
        let rng = (!options.shared_innovation)
            .then(|| substream(mix_seed(seed, u64::from(model.state_id())), LABEL_INNOVATIONS));
        slots.push(Slot {
            model: model.clone(),
            state,
            rng,
        });
    }

    let length = map.stream_length();
    let mut shared_rng = substream(seed, LABEL_INNOVATIONS);
    let mut history = initial_history;
    let mut outputs = vec![0.0; slots.len()];
    let mut returns = Vec::with_capacity(length as usize);
    let mut annotations = Vec::with_capacity(length as usize);
    let mut cursor = Cursor::new(map);

    for t in 0..length {
        let note = cursor.at(t);
        let shared_z = if options.shared_innovation {
            standard_normal(&mut shared_rng)
        } else {
            0.0
        };
        for (slot, out) in slots.iter_mut().zip(outputs.iter_mut()) {
            let z = match slot.rng.as_mut() {
                Some(rng) => standard_normal(rng),
                None => shared_z,
            };
            *out = step(&slot.model, &mut slot.state, &history, z)
                .map_err(|source| SimError::VarianceExplosion {
                    index: t,
                    state: slot.model.state_id(),
                    from: note.state,
                    to: note.to_state,
                    source,
                })?
                .value;
        }
        let from = outputs[slot_of(note.state)?];
        let emitted = match note.to_state {
            Some(to) => {
                let incoming = outputs[slot_of(to)?];
                from + note.weight * (incoming - from)
            }
            None => from,
        };
        history.push(emitted);
        returns.push(emitted);
        annotations.push(note);
    }

    Ok(SimulatedStream {
        seed,
        returns,
        log: GroundTruthLog {
            events: map.events().to_vec(),
            annotations,
        },
    })
}

/// Simulates `n_streams` independent streams; stream `i` uses
/// [`stream_seed`]`(base_seed, i)`. Output order follows the stream index.
pub fn simulate_batch(
    models: &[RegimeModel],
    map: &TransitionMap,
    n_streams: usize,
    base_seed: u64,
    options: &SimulationOptions,
) -> Result<Vec<SimulatedStream>, SimError> {
    (0..n_streams)
        .into_par_iter()
        .map(|i| {
            simulate_stream(models, map, stream_seed(base_seed, i), options).map_err(|e| {
                SimError::Stream {
                    stream: i,
                    source: Box::new(e),
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::econometrics::{ArmaParams, GarchParams, Innovation};

    fn noise(id: u32, v: f64) -> RegimeModel {
        RegimeModel::new(id, ArmaParams::white_noise(0.0), GarchParams::constant(v), Innovation::Normal)
            .unwrap()
    }

    fn ev(start: u64, duration: u64, from: u32, to: u32) -> TransitionEvent {
        TransitionEvent {
            start_index: start,
            duration,
            from_state: from,
            to_state: to,
        }
    }

    #[test]
    fn missing_model_is_reported() {
        let map = TransitionMap::new(vec![ev(10, 5, 1, 3)], 1, 100).unwrap();
        let err = simulate_stream(&[noise(1, 1.0)], &map, 0, &SimulationOptions::default());
        assert_eq!(err.unwrap_err(), SimError::MissingModel(3));
    }

    #[test]
    fn duplicate_model_is_reported() {
        let map = TransitionMap::new(vec![], 1, 100).unwrap();
        let err = simulate_stream(
            &[noise(1, 1.0), noise(1, 2.0)],
            &map,
            0,
            &SimulationOptions::default(),
        );
        assert_eq!(err.unwrap_err(), SimError::DuplicateModel(1));
    }

    #[test]
    fn annotations_follow_the_map() {
        let map = TransitionMap::new(vec![ev(10, 4, 1, 2), ev(14, 2, 2, 1)], 1, 20).unwrap();
        let log = GroundTruthLog::from_map(&map);
        assert_eq!(log.annotations.len(), 20);
        assert_eq!(log.annotations[9], Annotation { state: 1, to_state: None, weight: 0.0 });
        assert_eq!(log.annotations[10].to_state, Some(2));
        assert_eq!(log.annotations[14].state, 2);
        assert_eq!(log.annotations[14].to_state, Some(1));
        assert_eq!(log.annotations[16], Annotation { state: 1, to_state: None, weight: 0.0 });
        assert_eq!(log.recover_events(), map.events());
    }
}
