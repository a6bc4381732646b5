//! Stationary correlation measures versus noise strength.

use std::path::Path;
use std::time::Instant;

use anyhow::Result;

use qrc_core::correlations::{
    stationary_correlation_sweep, CorrelationSweepConfig, SweepCell, CORRELATION_FIELDS,
};

use crate::config::{CorrelationsSection, ExperimentConfig};
use crate::manifest::{fmt_f64, BundleWriter, ResultBundle};

pub(crate) fn sweep_config(cfg: &ExperimentConfig) -> CorrelationSweepConfig {
    let section = cfg.correlations.clone().unwrap_or_else(|| CorrelationsSection::default());
    CorrelationSweepConfig {
        n_qubits: cfg.model.n_qubits,
        h: cfg.model.h,
        disorder_width: cfg.model.disorder_width,
        symmetry_break: cfg.model.symmetry_break,
        delta_t: cfg.run.delta_t,
        washout: section.washout,
        window: section.window,
        encoding: cfg.run.encoding,
        eta: cfg.run.eta,
        p_err_grid: cfg.noise.p_err_grid.clone(),
        axes: cfg.noise.axes.clone(),
        n_realizations: cfg.n_realizations,
        master_seed: cfg.master_seed,
    }
}

pub(crate) fn write_sweep_csv(
    bundle: &mut BundleWriter,
    cfg: &ExperimentConfig,
    cells: &[SweepCell],
) -> Result<()> {
    bundle.write_csv(
        "correlations",
        "correlations.csv",
        &["axis", "p_err", "measure", "mean", "stderr", "n_realizations", "window", "seed"],
        cells.iter().flat_map(|cell| {
            let means = cell.mean.as_array();
            let errs = cell.stderr.as_array();
            CORRELATION_FIELDS.iter().enumerate().map(move |(i, name)| {
                vec![
                    cell.axis.to_string(),
                    fmt_f64(cell.p_err),
                    name.to_string(),
                    fmt_f64(means[i]),
                    fmt_f64(errs[i]),
                    cell.n_realizations.to_string(),
                    cell.window.to_string(),
                    cfg.master_seed.to_string(),
                ]
            }).collect::<Vec<_>>()
        }),
    )?;
    Ok(())
}

/// Correlation sweep over the configured (axis, p_err) grid.
pub fn run_correlation_sweep(cfg: &ExperimentConfig, out_dir: &Path) -> Result<ResultBundle> {
    let mut bundle = BundleWriter::create(out_dir, cfg)?;
    let t0 = Instant::now();
    let cells = stationary_correlation_sweep(&sweep_config(cfg))?;
    bundle.record_timing("correlation_sweep", t0.elapsed().as_millis());
    write_sweep_csv(&mut bundle, cfg, &cells)?;
    bundle.finish()
}
