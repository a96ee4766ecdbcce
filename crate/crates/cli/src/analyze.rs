use std::collections::BTreeSet;
use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use proteus_core::analysis::{
    class_balance, describe, embed_states, histogram, kmeans, purity, KMeansConfig, DEFAULT_WINDOW,
};
use proteus_core::io::{self, Manifest, DEFAULT_SPLIT_INDEX};
use proteus_core::regimegen::GroundTruthLog;

use crate::generate::read_stream;
use crate::output::{seal, write_file};

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Feature file written by `featurize` or `simulate --features`.
    #[arg(long)]
    features: PathBuf,
    /// Stream file with returns and per-instance states.
    #[arg(long)]
    returns: PathBuf,
    /// Ground-truth event file; checked against the stream's annotations.
    #[arg(long)]
    ground_truth: Option<PathBuf>,
    /// Number of k-means clusters.
    #[arg(long, default_value_t = 4)]
    kmeans: usize,
    /// Trailing window of the velocity/volatility embedding.
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    window: usize,
    #[arg(long, default_value_t = 100)]
    bins: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 300)]
    max_iter: usize,
    #[arg(long)]
    out_dir: PathBuf,
}

pub fn run(args: AnalyzeArgs) -> anyhow::Result<()> {
    let table = io::read_features(io::open(&args.features)?)
        .with_context(|| format!("reading {}", args.features.display()))?;
    let stream = read_stream(&args.returns)?;
    let n = stream.returns.len() as u64;
    if let Some(row) = table.rows.iter().find(|r| r.index >= n) {
        anyhow::bail!(
            "{} has a row for instance {} but {} holds only {n} instances",
            args.features.display(),
            row.index,
            args.returns.display()
        );
    }
    if let Some(path) = &args.ground_truth {
        let events: Vec<_> = io::read_ground_truth(io::open(path)?)
            .with_context(|| format!("reading {}", path.display()))?
            .into_iter()
            .map(|(e, _)| e)
            .collect();
        let log = GroundTruthLog {
            events: Vec::new(),
            annotations: stream.annotations.clone(),
        };
        anyhow::ensure!(
            log.recover_events() == events,
            "{} does not match the drifts annotated in {}",
            path.display(),
            args.returns.display()
        );
    }
    std::fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;
    let out = |name: &str| args.out_dir.join(name);
    let mut files = vec!["stats.csv".to_string()];

    let stats = describe(&table)?;
    write_file(&out("stats.csv"), |w| io::write_stats(w, &stats))?;

    let lo = stream.returns.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = stream.returns.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = if lo < hi { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
    let all = histogram(&stream.returns, args.bins, range)?;
    write_file(&out("histogram.csv"), |w| io::write_histogram(w, &all))?;
    files.push("histogram.csv".into());
    let states: BTreeSet<u32> = stream.annotations.iter().map(|a| a.state).collect();
    for s in &states {
        let values: Vec<f64> = stream
            .returns
            .iter()
            .zip(&stream.annotations)
            .filter(|(_, a)| a.state == *s && !a.in_transition())
            .map(|(r, _)| *r)
            .collect();
        let h = histogram(&values, args.bins, range)?;
        let name = format!("histogram_state{s}.csv");
        write_file(&out(&name), |w| io::write_histogram(w, &h))?;
        files.push(name);
    }

    let embedding = embed_states(&stream.returns, &stream.annotations, args.window)?;
    write_file(&out("embedding.csv"), |w| io::write_embedding(w, &embedding))?;
    let config = KMeansConfig {
        k: args.kmeans,
        seed: args.seed,
        max_iter: args.max_iter,
        ..Default::default()
    };
    let clusters = kmeans(&embedding.coordinates(), &config)?;
    let purity = purity(&clusters.assignments, &embedding.states());
    write_file(&out("centroids.csv"), |w| {
        io::write_centroids(w, &clusters.centroids, &clusters.cluster_sizes())
    })?;
    write_file(&out("assignments.csv"), |w| {
        io::write_assignments(w, &embedding, &clusters.assignments)
    })?;
    files.extend(["embedding.csv", "centroids.csv", "assignments.csv"].map(String::from));

    let balance = class_balance(&table.labels())?;
    let meta = serde_json::json!({
        "window": args.window,
        "bins": args.bins,
        "histogram_range": [range.0, range.1],
        "k": config.k,
        "seed": config.seed,
        "max_iter": config.max_iter,
        "tol": config.tol,
        "purity": purity,
        "inertia": clusters.inertia,
        "iterations": clusters.iterations,
        "converged": clusters.converged,
        "label0_share": balance,
        "feature_rows": table.rows.len(),
        "instances": n,
    });
    write_file(&out("analysis_meta.json"), |w| {
        serde_json::to_writer_pretty(&mut *w, &meta)?;
        writeln!(w)?;
        Ok(())
    })?;
    files.push("analysis_meta.json".into());

    let mut manifest = Manifest::new(args.seed, DEFAULT_SPLIT_INDEX);
    manifest.add_config("kmeans", &config)?;
    manifest.add_config(
        "inputs",
        &serde_json::json!({
            "features_sha256": io::sha256_file(&args.features)?,
            "stream_sha256": io::sha256_file(&args.returns)?,
            "window": args.window,
            "bins": args.bins,
        }),
    )?;
    for f in &files {
        manifest.add_file(&args.out_dir, f)?;
    }
    seal(&manifest, &out("manifest.json"))?;
    println!(
        "k-means purity {purity:.4} over {} points; label-0 share {balance:.4}; {} files in {}",
        embedding.points.len(),
        files.len(),
        args.out_dir.display()
    );
    Ok(())
}
