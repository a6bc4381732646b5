//! Joint capacity-versus-correlations report over a shared noise grid.

use std::path::Path;
use std::time::Instant;

use anyhow::Result;

use qrc_core::correlations::{stationary_correlation_sweep, SweepCell, CORRELATION_FIELDS};
use qrc_core::noise::NoiseAxis;

use crate::config::{ExperimentConfig, Scale};
use crate::experiments::correlations::sweep_config;
use crate::experiments::ipc::{summarize, write_ipc_artifacts, SummaryRow};
use crate::manifest::{fmt_f64, BundleWriter, ResultBundle};
use crate::pipeline::run_ipc_grid;

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let ra = ranks(a);
    let rb = ranks(b);
    pearson(&ra, &rb)
}

fn ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut out = vec![0.0; n];
    let mut k = 0;
    while k < n {
        let mut j = k;
        while j + 1 < n && values[idx[j + 1]] == values[idx[k]] {
            j += 1;
        }
        let avg = (k + j) as f64 / 2.0 + 1.0;
        for &i in &idx[k..=j] {
            out[i] = avg;
        }
        k = j + 1;
    }
    out
}

fn pearson(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut va = 0.0;
    let mut vb = 0.0;
    for (x, y) in a.iter().zip(b) {
        cov += (x - ma) * (y - mb);
        va += (x - ma) * (x - ma);
        vb += (y - mb) * (y - mb);
    }
    if va == 0.0 || vb == 0.0 {
        return 0.0;
    }
    cov / (va * vb).sqrt()
}

fn find_sweep_cell<'a>(cells: &'a [SweepCell], axis: NoiseAxis, p: f64) -> Option<&'a SweepCell> {
    cells.iter().find(|c| c.axis == axis && c.p_err == p)
}

/// Joined table (axis, p_err) → (capacity, correlation measures) plus
/// Spearman rank-correlation summaries pooled over both axes.
pub fn run_ipc_vs_correlations(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    scale: Option<Scale>,
) -> Result<ResultBundle> {
    let mut bundle = BundleWriter::create(out_dir, cfg)?;

    let t0 = Instant::now();
    let grid = run_ipc_grid(cfg, cfg.train_len(scale), cfg.master_seed)?;
    bundle.record_timing("ipc_grid", t0.elapsed().as_millis());

    let t0 = Instant::now();
    let sweep = stationary_correlation_sweep(&sweep_config(cfg))?;
    bundle.record_timing("correlation_sweep", t0.elapsed().as_millis());

    write_ipc_artifacts(&mut bundle, cfg, &grid)?;
    crate::experiments::correlations::write_sweep_csv(&mut bundle, cfg, &sweep)?;

    // joined long table
    let summaries: Vec<SummaryRow> = summarize(cfg, &grid);
    let mut joined_header: Vec<String> = vec![
        "axis".into(),
        "p_err".into(),
        "mean_normalized_ipc".into(),
        "stderr_normalized_ipc".into(),
    ];
    for f in CORRELATION_FIELDS {
        joined_header.push(f.to_string());
        joined_header.push(format!("{f}_stderr"));
    }
    let header_refs: Vec<&str> = joined_header.iter().map(String::as_str).collect();
    let mut joined_rows = Vec::new();
    for s in &summaries {
        let Some(cell) = find_sweep_cell(&sweep, s.axis, s.p_err) else { continue };
        let mut row = vec![
            s.axis.to_string(),
            fmt_f64(s.p_err),
            fmt_f64(s.mean_normalized),
            fmt_f64(s.stderr_normalized),
        ];
        for (m, e) in cell.mean.as_array().iter().zip(cell.stderr.as_array()) {
            row.push(fmt_f64(*m));
            row.push(fmt_f64(e));
        }
        joined_rows.push(row);
    }
    bundle.write_csv("joined", "ipc_vs_correlations.csv", &header_refs, joined_rows.into_iter())?;

    // rank correlations pooled over axes
    let ipc: Vec<f64> = summaries.iter().map(|s| s.mean_normalized).collect();
    let mut spearman_rows = Vec::new();
    for (fi, field) in CORRELATION_FIELDS.iter().enumerate() {
        let xs: Vec<f64> = summaries
            .iter()
            .map(|s| {
                find_sweep_cell(&sweep, s.axis, s.p_err)
                    .map(|c| c.mean.as_array()[fi])
                    .unwrap_or(f64::NAN)
            })
            .collect();
        spearman_rows.push(vec![field.to_string(), fmt_f64(spearman(&xs, &ipc))]);
    }
    bundle.write_csv(
        "spearman",
        "spearman.csv",
        &["measure", "spearman_rho"],
        spearman_rows.into_iter(),
    )?;

    bundle.finish()
}
