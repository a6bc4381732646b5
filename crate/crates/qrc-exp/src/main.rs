use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use qrc_exp::config::{ExperimentConfig, ExperimentKind, Scale};
use qrc_exp::experiments::run_experiment;

/// Quantum-reservoir experiment runner.
#[derive(Parser)]
#[command(name = "qrc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CommonArgs {
    /// Experiment configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Output directory (default: the config's out_dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sequence-length preset: desk = 1e4 train steps, paper = 1e5.
    #[arg(long, value_enum)]
    scale: Option<ScaleArg>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum ScaleArg {
    Desk,
    Paper,
}

impl From<ScaleArg> for Scale {
    fn from(s: ScaleArg) -> Self {
        match s {
            ScaleArg::Desk => Scale::Desk,
            ScaleArg::Paper => Scale::Paper,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Gap-ratio and stationary-coherence maps over (h, W).
    PhaseDiagram(CommonArgs),
    /// Correlation measures versus noise strength.
    Correlations(CommonArgs),
    /// Sub-step-resolved Z-observable traces.
    Trajectories(CommonArgs),
    /// Degree-resolved capacity sweep.
    Ipc(CommonArgs),
    /// Joint capacity-versus-correlations report.
    IpcVsCorrelations(CommonArgs),
    /// Stationary magnitudes of all 1- and 2-local observables.
    StationaryStats(CommonArgs),
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::PhaseDiagram(_) => ExperimentKind::PhaseDiagram,
            Command::Correlations(_) => ExperimentKind::Correlations,
            Command::Trajectories(_) => ExperimentKind::Trajectories,
            Command::Ipc(_) => ExperimentKind::Ipc,
            Command::IpcVsCorrelations(_) => ExperimentKind::IpcVsCorrelations,
            Command::StationaryStats(_) => ExperimentKind::StationaryStats,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::PhaseDiagram(a)
            | Command::Correlations(a)
            | Command::Trajectories(a)
            | Command::Ipc(a)
            | Command::IpcVsCorrelations(a)
            | Command::StationaryStats(a) => a,
        }
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let kind = cli.command.kind();
    let args = cli.command.args();

    if let Some(workers) = args.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .context("configuring worker pool")?;
    }

    let mut cfg = ExperimentConfig::load(&args.config)?;
    if cfg.kind != kind {
        bail!(
            "config declares kind '{}' but the '{}' subcommand was invoked",
            cfg.kind,
            kind
        );
    }
    if let Some(seed) = args.seed {
        cfg.master_seed = seed;
    }
    let out_dir = match (&args.out, &cfg.out_dir) {
        (Some(dir), _) => dir.clone(),
        (None, Some(dir)) => dir.clone(),
        (None, None) => bail!("no output directory: set out_dir in the config or pass --out"),
    };

    let started = std::time::Instant::now();
    let bundle = run_experiment(&cfg, &out_dir, args.scale.map(Into::into))?;
    eprintln!(
        "{} finished in {:.1}s; {} artifacts in {}",
        kind,
        started.elapsed().as_secs_f64(),
        bundle.manifest.artifacts.len(),
        bundle.out_dir.display()
    );
    for artifact in &bundle.manifest.artifacts {
        eprintln!("  {} ({} rows): {}", artifact.name, artifact.rows, artifact.file);
    }
    Ok(())
}
