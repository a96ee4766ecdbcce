use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use proteus_core::econometrics::{fit, OptimizerConfig, OrderGrid, OrderRange};
use proteus_core::io::{self, FitSummary, Manifest, DEFAULT_SPLIT_INDEX};

use crate::args::order_range;
use crate::output::{dir_of, file_name, seal, sidecar_manifest, write_file};

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Bar file with `timestamp,open,high,low,close[,volume]` columns.
    #[arg(long)]
    input: PathBuf,
    /// Use only the first N bars.
    #[arg(long)]
    take: Option<usize>,
    /// Inclusive range for both ARMA orders.
    #[arg(long, default_value = "0..5", value_parser = order_range)]
    grid_arma: OrderRange,
    /// Inclusive range for both GARCH orders.
    #[arg(long, default_value = "1..3", value_parser = order_range)]
    grid_garch: OrderRange,
    #[arg(long, default_value_t = 1)]
    state_id: u32,
    #[arg(long, default_value_t = 2000)]
    max_iterations: usize,
    #[arg(long, default_value_t = 200)]
    min_observations: usize,
    #[arg(long)]
    out: PathBuf,
}

pub fn run(args: FitArgs) -> anyhow::Result<()> {
    let bars = io::load_bars(io::open(&args.input)?, args.take)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let returns = bars.log_returns();
    let grid = OrderGrid::uniform(args.grid_arma, args.grid_garch);
    let optimizer = OptimizerConfig {
        max_iterations: args.max_iterations,
        min_observations: args.min_observations,
        ..Default::default()
    };
    let report = fit(&returns, &grid, &optimizer)
        .with_context(|| format!("fitting {} ({} returns)", args.input.display(), returns.len()))?;
    let model = report.model.clone().with_state_id(args.state_id);

    println!("{:<22} {:>3} {:>16} {:>16}  status", "orders", "k", "log_likelihood", "aic");
    for c in &report.grid {
        let num = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.4}"));
        let status = match (&c.failure, c.converged) {
            (Some(f), _) => format!("failed: {f}"),
            (None, true) => "ok".to_string(),
            (None, false) => "not converged".to_string(),
        };
        println!(
            "{:<22} {:>3} {:>16} {:>16}  {status}",
            c.orders.to_string(),
            c.k,
            num(c.log_likelihood),
            num(c.aic)
        );
    }
    println!(
        "selected {} (state {}) with AIC {:.4} from {} bars",
        report.orders(),
        args.state_id,
        report.aic,
        bars.bars.len()
    );

    write_file(&args.out, |w| io::write_model(w, &model, Some(FitSummary::from(&report))))?;

    let mut manifest = Manifest::new(0, DEFAULT_SPLIT_INDEX);
    manifest.add_config("grid", &grid)?;
    manifest.add_config("optimizer", &optimizer)?;
    manifest.add_config(
        "input",
        &serde_json::json!({
            "sha256": io::sha256_file(&args.input)?,
            "take": args.take,
            "state_id": args.state_id,
        }),
    )?;
    manifest.add_file(dir_of(&args.out), &file_name(&args.out))?;
    seal(&manifest, &sidecar_manifest(&args.out))
}
