use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use proteus_core::features::{featurize as build_features, IndicatorConfig, DEFAULT_INITIAL_PRICE};
use proteus_core::io::{self, Manifest, DEFAULT_SPLIT_INDEX};
use proteus_core::regimegen::{generate_map, DriftKind, simulate_stream, stream_seed, SimulationOptions, StreamConfig};
use rayon::prelude::*;

use crate::args::IndicatorArgs;
use crate::output::{dir_of, file_name, seal, sidecar_manifest, write_file};

#[derive(Debug, Args)]
pub struct GenMapArgs {
    #[arg(long, default_value_t = 1_500_000)]
    length: u64,
    /// Instances between drift starts.
    #[arg(long, default_value_t = 5_000)]
    interval: u64,
    #[arg(long, default_value_t = 4)]
    states: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1_000)]
    gradual: u64,
    #[arg(long, default_value_t = 100)]
    abrupt: u64,
    #[arg(long, default_value_t = 1)]
    initial_state: u32,
    #[arg(long)]
    out: PathBuf,
}

impl GenMapArgs {
    fn config(&self) -> StreamConfig {
        StreamConfig {
            length: self.length,
            interval: self.interval,
            seed: self.seed,
            gradual_duration: self.gradual,
            abrupt_duration: self.abrupt,
            initial_state: self.initial_state,
        }
    }
}

pub fn gen_map(args: GenMapArgs) -> anyhow::Result<()> {
    let config = args.config();
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
    let map = generate_map(&config, args.states)?;
    write_file(&args.out, |w| io::write_map(w, &map))?;
    let abrupt = map
        .events()
        .iter()
        .filter(|e| config.kind_of(e.duration) == DriftKind::Abrupt)
        .count();
    println!(
        "{} events ({} abrupt, {} gradual) over {} instances",
        map.events().len(),
        abrupt,
        map.events().len() - abrupt,
        map.stream_length()
    );

    let mut manifest = Manifest::new(args.seed, DEFAULT_SPLIT_INDEX);
    manifest.add_config("stream", &config)?;
    manifest.add_config("states", &args.states)?;
    manifest.add_file(dir_of(&args.out), &file_name(&args.out))?;
    seal(&manifest, &sidecar_manifest(&args.out))
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Directory of model JSON files, one per state.
    #[arg(long)]
    models: PathBuf,
    #[arg(long)]
    map: PathBuf,
    #[arg(long, default_value_t = 1)]
    streams: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 500)]
    burn_in: usize,
    /// Zero the mean of every model before simulating.
    #[arg(long)]
    mean_neutral: bool,
    /// Draw separate innovations per model instead of sharing them.
    #[arg(long)]
    independent_innovations: bool,
    /// Also write a feature file per stream.
    #[arg(long)]
    features: bool,
    #[arg(long, default_value_t = DEFAULT_INITIAL_PRICE)]
    initial_price: f64,
    /// Durations used to label drifts abrupt or gradual.
    #[arg(long, default_value_t = 100)]
    abrupt: u64,
    #[arg(long, default_value_t = 1_000)]
    gradual: u64,
    /// Pre-train/evaluation boundary recorded in the manifest.
    #[arg(long, default_value_t = DEFAULT_SPLIT_INDEX)]
    split_index: u64,
    #[command(flatten)]
    indicators: IndicatorArgs,
}

fn stream_files(i: usize) -> [String; 3] {
    [
        format!("stream_{i:03}.csv"),
        format!("ground_truth_{i:03}.csv"),
        format!("features_{i:03}.csv"),
    ]
}

pub fn simulate(args: SimulateArgs) -> anyhow::Result<()> {
    anyhow::ensure!(args.streams > 0, "--streams must be at least 1");
    let models = io::read_model_dir(&args.models)?;
    let map = io::read_map(io::open(&args.map)?, None)
        .with_context(|| format!("reading {}", args.map.display()))?;
    let options = SimulationOptions {
        burn_in: args.burn_in,
        shared_innovation: !args.independent_innovations,
        mean_neutral: args.mean_neutral,
    };
    let indicators = IndicatorConfig::from(&args.indicators);
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;

    (0..args.streams).into_par_iter().try_for_each(|i| -> anyhow::Result<()> {
        let seed = stream_seed(args.seed, i);
        let s = simulate_stream(&models, &map, seed, &options)
            .with_context(|| format!("stream {i} (seed {seed})"))?;
        let [stream, truth, features] = stream_files(i);
        write_file(&args.out_dir.join(stream), |w| {
            io::write_stream(w, &s.returns, &s.log.annotations)
        })?;
        write_file(&args.out_dir.join(truth), |w| {
            io::write_ground_truth(w, &s.log.events, args.abrupt, args.gradual)
        })?;
        if args.features {
            let table = build_features(&s.returns, args.initial_price, &indicators)
                .with_context(|| format!("features of stream {i}"))?;
            write_file(&args.out_dir.join(features), |w| io::write_features(w, &table))?;
        }
        Ok(())
    })?;

    let mut manifest = Manifest::new(args.seed, args.split_index);
    manifest.add_config("simulation", &options)?;
    manifest.add_config(
        "run",
        &serde_json::json!({
            "streams": args.streams,
            "map_sha256": io::sha256_file(&args.map)?,
            "initial_price": args.initial_price,
            "abrupt": args.abrupt,
            "gradual": args.gradual,
        }),
    )?;
    let model_digests: Vec<(String, String)> = models
        .iter()
        .map(|m| (m.state_id().to_string(), io::ModelFile::new(m, None)))
        .map(|(id, f)| Ok((id, serde_json::to_string(&f)?)))
        .collect::<Result<_, serde_json::Error>>()?;
    manifest.add_config("models", &model_digests)?;
    if args.features {
        manifest.add_config("indicators", &indicators)?;
    }
    for i in 0..args.streams {
        let names = stream_files(i);
        let count = if args.features { 3 } else { 2 };
        for name in &names[..count] {
            manifest.add_file(&args.out_dir, name)?;
        }
    }
    seal(&manifest, &args.out_dir.join("manifest.json"))?;
    println!(
        "{} stream(s) of {} instances with {} drifts written to {}",
        args.streams,
        map.stream_length(),
        map.events().len(),
        args.out_dir.display()
    );
    Ok(())
}

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    /// Stream file written by `simulate`.
    #[arg(long)]
    stream: PathBuf,
    #[arg(long, default_value_t = DEFAULT_INITIAL_PRICE)]
    initial_price: f64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    indicators: IndicatorArgs,
}

pub fn featurize(args: FeaturizeArgs) -> anyhow::Result<()> {
    let data = read_stream(&args.stream)?;
    let indicators = IndicatorConfig::from(&args.indicators);
    let table = build_features(&data.returns, args.initial_price, &indicators)?;
    write_file(&args.out, |w| io::write_features(w, &table))?;
    println!(
        "{} feature rows (warm-up {}) written to {}",
        table.rows.len(),
        indicators.warm_up(),
        args.out.display()
    );

    let mut manifest = Manifest::new(0, DEFAULT_SPLIT_INDEX);
    manifest.add_config("indicators", &indicators)?;
    manifest.add_config(
        "input",
        &serde_json::json!({
            "sha256": io::sha256_file(&args.stream)?,
            "initial_price": args.initial_price,
        }),
    )?;
    manifest.add_file(dir_of(&args.out), &file_name(&args.out))?;
    seal(&manifest, &sidecar_manifest(&args.out))
}

pub fn read_stream(path: &Path) -> anyhow::Result<io::StreamData> {
    io::read_stream(io::open(path)?).with_context(|| format!("reading {}", path.display()))
}
