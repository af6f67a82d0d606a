use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use fiapower_core::config::{ExperimentConfig, ExperimentKind};
use fiapower_core::experiments::{run_experiment, write_outcome};

/// Reproduce the energy comparisons of IP, NDN, NEBULA and SCION.
#[derive(Debug, Parser)]
#[command(name = "fiapower", version)]
struct Args {
    /// fig3, fig6, fig8, fig9, sweep_budget, sweep_zipf or sweep_discovery
    experiment: ExperimentKind,
    /// TOML config; every key is optional
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config seed
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: the config's out_dir)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core
    #[arg(long)]
    jobs: Option<usize>,
}

fn run(args: Args) -> anyhow::Result<()> {
    let mut cfg = ExperimentConfig::load(&args.config)
        .with_context(|| format!("loading config {}", args.config.display()))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(out) = args.out {
        cfg.out_dir = out;
    }
    if let Some(jobs) = args.jobs {
        cfg.jobs = jobs;
    }
    let outcome = run_experiment(args.experiment, &cfg).with_context(|| format!("running {}", args.experiment))?;
    let manifest = write_outcome(args.experiment, &cfg, &outcome, &cfg.out_dir)?;
    println!("{} files written, manifest at {}", outcome.files.len() + 1, manifest.display());
    Ok(())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
