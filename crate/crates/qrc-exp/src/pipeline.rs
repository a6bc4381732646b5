//! Shared machinery for grid experiments: noise cells, disorder-realization
//! reuse, readout generation and capacity evaluation.
//!
//! Work is distributed over (cell, realization) tasks; results are reduced
//! in task order so artifacts do not depend on the worker count. Noiseless
//! grid points are computed once and reused for every axis.

use anyhow::Result;
use rayon::prelude::*;

use qrc_core::ipc::{total_ipc, CapacityReport, IpcConfig, IpcInput};
use qrc_core::noise::{NoiseAxis, NoiseSpec};
use qrc_core::reservoir::{add_readout_noise, run_reservoir_on, RunConfig, RunOptions};
use qrc_core::spin::{sample_hamiltonian, HamiltonianRealization, ModelParams};
use qrc_core::streams::{derive_seed, uniform_sequence};

use crate::config::ExperimentConfig;

/// One physical noise setting; p_err = 0 is the shared noiseless point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseCell {
    pub axis: NoiseAxis,
    pub p_err: f64,
}

impl NoiseCell {
    pub fn label(&self) -> String {
        format!("{}/{}", self.axis, self.p_err)
    }
}

/// Deduplicated physical cells for an (axes x p_err grid) sweep: one
/// noiseless cell if the grid contains 0, plus every (axis, p > 0) pair.
pub fn physical_cells(axes: &[NoiseAxis], p_grid: &[f64]) -> Vec<NoiseCell> {
    let mut cells = Vec::new();
    if p_grid.contains(&0.0) {
        cells.push(NoiseCell { axis: NoiseAxis::None, p_err: 0.0 });
    }
    for &axis in axes {
        for &p in p_grid {
            if p > 0.0 {
                cells.push(NoiseCell { axis, p_err: p });
            }
        }
    }
    cells
}

/// The disorder ensemble shared by every cell of an experiment.
pub fn realization_ensemble(
    cfg: &ExperimentConfig,
    master_seed: u64,
) -> Result<Vec<HamiltonianRealization>> {
    (0..cfg.n_realizations)
        .map(|r| {
            let params = ModelParams {
                n_qubits: cfg.model.n_qubits,
                h: cfg.model.h,
                disorder_width: cfg.model.disorder_width,
                symmetry_break: cfg.model.symmetry_break,
                seed: 0,
            }
            .with_realization(master_seed, r);
            Ok(sample_hamiltonian(&params)?)
        })
        .collect()
}

/// Capacity reports for every (cell, realization) of an IPC grid.
pub struct IpcGrid {
    pub cells: Vec<NoiseCell>,
    /// `reports[cell_index][realization]`.
    pub reports: Vec<Vec<CapacityReport>>,
    pub train_len: usize,
}

impl IpcGrid {
    /// Mean normalized capacity of a cell.
    pub fn mean_normalized(&self, cell_index: usize) -> f64 {
        let rs = &self.reports[cell_index];
        rs.iter().map(|r| r.normalized).sum::<f64>() / rs.len() as f64
    }

    pub fn find_cell(&self, axis: NoiseAxis, p_err: f64) -> Option<usize> {
        // p = 0 is stored once under the `None` axis
        let want_axis = if p_err == 0.0 { NoiseAxis::None } else { axis };
        self.cells
            .iter()
            .position(|c| c.axis == want_axis && c.p_err == p_err)
    }
}

/// Run the reservoir + readout-noise + capacity pipeline over a noise grid,
/// reusing one disorder ensemble and one input sequence for every cell.
pub fn run_ipc_grid(cfg: &ExperimentConfig, train_len: usize, master_seed: u64) -> Result<IpcGrid> {
    let cells = physical_cells(&cfg.noise.axes, &cfg.noise.p_err_grid);
    let ensemble = realization_ensemble(cfg, master_seed)?;
    let washout = cfg.run.washout;
    let total_rows = 2 * train_len;
    let inputs = uniform_sequence(master_seed, "input", washout + total_rows);

    let mut ipc_cfg: IpcConfig = cfg.ipc.cfg.clone();
    ipc_cfg.seed = derive_seed(master_seed, "surrogates");

    let tasks: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|c| (0..ensemble.len()).map(move |r| (c, r)))
        .collect();

    let results: Result<Vec<((usize, usize), CapacityReport)>> = tasks
        .par_iter()
        .map(|&(c, r)| {
            let cell = cells[c];
            let hr = &ensemble[r];
            let run_cfg = RunConfig {
                model: hr.params,
                delta_t: cfg.run.delta_t,
                washout,
                len: total_rows,
                encoding: cfg.run.encoding,
                noise: NoiseSpec { axis: cell.axis, p_err: cell.p_err, eta: cfg.run.eta },
                observables: cfg.observables.to_set(),
                sigma_bar: cfg.run.sigma_bar,
                input_seed: master_seed,
                readout_noise_seed: derive_seed(
                    master_seed,
                    &format!("readout/{}/{r}", cell.label()),
                ),
            };
            let out = run_reservoir_on(hr, &run_cfg, &inputs, None, &RunOptions::default())?;
            let noisy = add_readout_noise(&out.readout, run_cfg.sigma_bar, run_cfg.readout_noise_seed);
            let report = total_ipc(
                &IpcInput {
                    readout: &noisy,
                    inputs: &inputs,
                    first_row_t0: washout + 1,
                    train_len,
                },
                &ipc_cfg,
            )?;
            Ok(((c, r), report))
        })
        .collect();

    let mut reports: Vec<Vec<Option<CapacityReport>>> =
        vec![vec![None; ensemble.len()]; cells.len()];
    for ((c, r), rep) in results? {
        reports[c][r] = Some(rep);
    }
    let reports = reports
        .into_iter()
        .map(|row| row.into_iter().map(|r| r.expect("every task completed")).collect())
        .collect();
    Ok(IpcGrid { cells, reports, train_len })
}

/// Mean and standard error over a slice.
pub fn mean_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample standard deviation.
pub fn stddev(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}
