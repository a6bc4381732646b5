//! The experiment families, one module per CLI subcommand.

mod correlations;
mod ipc;
mod ipc_vs_corr;
mod phase_diagram;
mod stationary;
mod trajectories;

pub use correlations::run_correlation_sweep;
pub use ipc::run_ipc_experiment;
pub use ipc_vs_corr::{run_ipc_vs_correlations, spearman};
pub use phase_diagram::run_phase_diagram;
pub use stationary::run_stationary_stats;
pub use trajectories::run_trajectory_dump;

use std::path::Path;

use anyhow::Result;

use crate::config::{ExperimentConfig, ExperimentKind, Scale};
use crate::manifest::ResultBundle;

/// Dispatch an experiment by its configured kind.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    scale: Option<Scale>,
) -> Result<ResultBundle> {
    match cfg.kind {
        ExperimentKind::PhaseDiagram => run_phase_diagram(cfg, out_dir),
        ExperimentKind::Correlations => run_correlation_sweep(cfg, out_dir),
        ExperimentKind::Trajectories => run_trajectory_dump(cfg, out_dir),
        ExperimentKind::Ipc => run_ipc_experiment(cfg, out_dir, scale),
        ExperimentKind::IpcVsCorrelations => run_ipc_vs_correlations(cfg, out_dir, scale),
        ExperimentKind::StationaryStats => run_stationary_stats(cfg, out_dir),
    }
}
