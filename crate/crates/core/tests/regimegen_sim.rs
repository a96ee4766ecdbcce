use std::path::PathBuf;

use proteus_core::econometrics::{ArmaParams, GarchParams, Innovation, RegimeModel};
use proteus_core::io;
use proteus_core::regimegen::{
    generate_map, sigmoid_weight, simulate_batch, simulate_stream, DriftKind, GroundTruthLog,
    SimulationOptions, StreamConfig, TransitionEvent, TransitionMap,
};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn model(id: u32, phi: f64, omega: f64, alpha: f64, beta: f64) -> RegimeModel {
    RegimeModel::new(
        id,
        ArmaParams::new(2e-5, vec![phi], vec![-0.1]),
        GarchParams::new(omega, vec![alpha], vec![beta]),
        Innovation::Normal,
    )
    .unwrap()
}

fn four_states() -> Vec<RegimeModel> {
    vec![
        model(1, 0.05, 2e-7, 0.08, 0.9),
        model(2, -0.1, 1e-6, 0.12, 0.8),
        model(3, 0.2, 5e-7, 0.05, 0.9),
        model(4, 0.0, 3e-6, 0.1, 0.6),
    ]
}

fn desk_map(seed: u64) -> TransitionMap {
    let cfg = StreamConfig {
        length: 30_000,
        interval: 5_000,
        seed,
        ..Default::default()
    };
    generate_map(&cfg, 4).unwrap()
}

fn stats(x: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
    (mean, m2, m4 / (m2 * m2))
}

#[test]
fn identical_models_blend_to_the_same_stream() {
    let base = model(1, 0.3, 1e-6, 0.1, 0.85);
    let models: Vec<RegimeModel> = (1..=4).map(|i| base.clone().with_state_id(i)).collect();
    let map = desk_map(8);
    let quiet = TransitionMap::new(Vec::new(), map.initial_state(), map.stream_length()).unwrap();
    let opts = SimulationOptions::default();
    let a = simulate_stream(&models, &map, 77, &opts).unwrap();
    let b = simulate_stream(&models, &quiet, 77, &opts).unwrap();
    assert_eq!(a.log.events.len(), 6);
    let bits = |s: &[f64]| s.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a.returns), bits(&b.returns));
    assert_eq!(sigmoid_weight(5_500, 5_000, 1_000), 0.5);
    assert_eq!(sigmoid_weight(5_050, 5_000, 100), 0.5);
}

#[test]
fn garch_stream_targets_unconditional_variance() {
    let m = RegimeModel::new(
        1,
        ArmaParams::white_noise(0.0),
        GarchParams::new(1e-6, vec![0.1], vec![0.85]),
        Innovation::Normal,
    )
    .unwrap();
    let map = TransitionMap::new(Vec::new(), 1, 200_000).unwrap();
    let s = simulate_stream(&[m.clone()], &map, 2024, &SimulationOptions::default()).unwrap();
    let (_, var, _) = stats(&s.returns);
    let target = m.garch().unconditional_variance();
    assert!((var / target - 1.0).abs() < 0.05, "{var} vs {target}");
}

#[test]
fn gaussian_noise_moments() {
    let v = 4e-6;
    let m = RegimeModel::new(1, ArmaParams::white_noise(0.0), GarchParams::constant(v), Innovation::Normal).unwrap();
    let map = TransitionMap::new(Vec::new(), 1, 200_000).unwrap();
    let s = simulate_stream(&[m], &map, 5, &SimulationOptions::default()).unwrap();
    let (mean, var, kurt) = stats(&s.returns);
    assert!(mean.abs() < 3.0 * (v / 200_000.0f64).sqrt());
    assert!((var / v - 1.0).abs() < 0.03);
    assert!((2.8..=3.2).contains(&kurt), "{kurt}");
}

#[test]
fn annotations_reconstruct_the_map() {
    let map = desk_map(3);
    let s = simulate_stream(&four_states(), &map, 1, &SimulationOptions::default()).unwrap();
    assert_eq!(s.returns.len(), 30_000);
    assert_eq!(s.log.recover_events(), map.events());
    assert_eq!(s.log, GroundTruthLog::from_map(&map));
    for e in map.events() {
        let inside = &s.log.annotations[e.start_index as usize..e.end() as usize];
        assert!(inside.iter().all(|a| a.state == e.from_state && a.to_state == Some(e.to_state)));
        assert!(inside.windows(2).all(|w| w[0].weight <= w[1].weight));
        if let Some(after) = s.log.annotations.get(e.end() as usize) {
            assert_eq!((after.state, after.to_state), (e.to_state, None));
        }
    }
}

#[test]
fn shortening_a_drift_only_changes_later_instances() {
    let map = desk_map(12);
    let idx = map.events().iter().position(|e| e.duration == 100).unwrap();
    let shorter = map.with_duration(idx, 1).unwrap();
    let opts = SimulationOptions::default();
    let a = simulate_stream(&four_states(), &map, 9, &opts).unwrap();
    let b = simulate_stream(&four_states(), &shorter, 9, &opts).unwrap();
    let start = map.events()[idx].start_index as usize;
    assert_eq!(a.returns[..start], b.returns[..start]);
    assert_ne!(a.returns[start..], b.returns[start..]);
}

#[test]
fn batches_are_deterministic_and_distinct() {
    let map = desk_map(1);
    let opts = SimulationOptions::default();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| simulate_batch(&four_states(), &map, 6, 42, &opts).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    for i in 0..one.len() {
        for j in i + 1..one.len() {
            assert_ne!(one[i].returns, one[j].returns);
        }
    }
    let single = simulate_stream(&four_states(), &map, one[2].seed, &opts).unwrap();
    assert_eq!(single, one[2]);
}

#[test]
fn independent_innovations_differ_from_shared() {
    let map = desk_map(2);
    let shared = simulate_stream(&four_states(), &map, 3, &SimulationOptions::default()).unwrap();
    let independent = SimulationOptions {
        shared_innovation: false,
        ..Default::default()
    };
    let a = simulate_stream(&four_states(), &map, 3, &independent).unwrap();
    let b = simulate_stream(&four_states(), &map, 3, &independent).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.returns, shared.returns);
}

#[test]
fn full_scale_map_and_stream() {
    let map = generate_map(&StreamConfig::default(), 4).unwrap();
    assert_eq!(map.events().len(), 300);
    let abrupt = map.events().iter().filter(|e| e.duration == 100).count();
    assert_eq!(abrupt, 150);
    let s = simulate_stream(&four_states(), &map, 0, &SimulationOptions::default()).unwrap();
    assert_eq!(s.returns.len(), 1_500_000);
    assert!(s.returns.iter().all(|r| r.is_finite()));
    assert_eq!(s.log.recover_events(), map.events());
}

#[test]
fn reference_map_fixture() {
    let map = io::read_map(io::open(&fixture("reference_map_1500k.csv")).unwrap(), Some(4)).unwrap();
    assert_eq!(map.events().len(), 300);
    assert_eq!(
        map.events()[0],
        TransitionEvent {
            start_index: 5_000,
            duration: 100,
            from_state: 1,
            to_state: 2
        }
    );
    let kinds: Vec<DriftKind> = map
        .events()
        .iter()
        .map(|e| DriftKind::classify(e.duration, 100, 1000))
        .collect();
    let abrupt = kinds.iter().filter(|k| **k == DriftKind::Abrupt).count();
    assert_eq!((abrupt, kinds.len() - abrupt), (149, 151));
}
