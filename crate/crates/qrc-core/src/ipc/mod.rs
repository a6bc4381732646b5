//! Degree-resolved Information Processing Capacity (IPC).
//!
//! Targets are products of Legendre polynomials of delayed inputs,
//! `ȳ_k = Π_i P_{d_i}(s̃_{k−i})` with `s̃ = 2s − 1`, probed degree by degree.
//! Each target is fit by linear least squares on the train half of the
//! readout and scored on the test half as `C = 1 − MSE/⟨ȳ²⟩`; scores below a
//! surrogate threshold (capacities of cyclically shifted targets) count as
//! zero. The retained capacities sum to the total `I_tot ∈ [0, M]`.
//!
//! Delay convention: delay 1 refers to the most recent input the measured
//! row can depend on, i.e. the input injected one interval before the row's
//! measurement instant.

mod lstsq;

pub use lstsq::{LstsqSolver, SV_CUTOFF};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::reservoir::ReadoutMatrix;
use crate::streams::stream;
use crate::{Error, Result};

/// Legendre polynomial `P_d(x)` by the Bonnet three-term recurrence.
pub fn legendre(degree: u32, x: f64) -> f64 {
    match degree {
        0 => 1.0,
        1 => x,
        _ => {
            let mut prev = 1.0;
            let mut cur = x;
            for k in 1..degree {
                let next = ((2 * k + 1) as f64 * x * cur - k as f64 * prev) / (k + 1) as f64;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// One product target: distinct positive delays, each with a degree ≥ 1.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TargetSpec {
    /// `(delay, degree)` pairs, sorted by delay.
    pub terms: Vec<(u32, u32)>,
}

impl TargetSpec {
    pub fn new(mut terms: Vec<(u32, u32)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("empty target spec".into()));
        }
        terms.sort_by_key(|&(delay, _)| delay);
        for pair in terms.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidParameter("duplicate delay in target spec".into()));
            }
        }
        if terms.iter().any(|&(delay, degree)| delay == 0 || degree == 0) {
            return Err(Error::InvalidParameter("delays and degrees must be >= 1".into()));
        }
        Ok(Self { terms })
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|&(_, d)| d).sum()
    }

    pub fn max_delay(&self) -> u32 {
        self.terms.last().map(|&(d, _)| d).unwrap_or(0)
    }
}

impl std::fmt::Display for TargetSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for &(delay, degree) in &self.terms {
            if !first {
                write!(f, "+")?;
            }
            write!(f, "{delay}:{degree}")?;
            first = false;
        }
        Ok(())
    }
}

impl std::fmt::Debug for TargetSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        std::fmt::Display::fmt(self, f)
    }
}

/// Target sequence over all rows with full history; rows whose history would
/// reach before the first input are excluded (the sequence starts at row
/// index `max_delay`).
pub fn build_target(spec: &TargetSpec, inputs: &[f64]) -> Result<Vec<f64>> {
    let max_delay = spec.max_delay() as usize;
    if inputs.len() <= max_delay {
        return Err(Error::InsufficientData(format!(
            "need more than {max_delay} inputs, got {}",
            inputs.len()
        )));
    }
    Ok(build_target_rows(spec, inputs, max_delay, inputs.len() - max_delay))
}

/// Targets for `count` rows where row `r`'s delay-`i` input is
/// `inputs[t0 + r - i]`. Requires `t0 >= max_delay`.
fn build_target_rows(spec: &TargetSpec, inputs: &[f64], t0: usize, count: usize) -> Vec<f64> {
    debug_assert!(t0 >= spec.max_delay() as usize);
    debug_assert!(t0 + count <= inputs.len() + 1);
    let mut y = vec![1.0; count];
    for &(delay, degree) in &spec.terms {
        let base = t0 - delay as usize;
        for (r, yr) in y.iter_mut().enumerate() {
            let stilde = 2.0 * inputs[base + r] - 1.0;
            *yr *= legendre(degree, stilde);
        }
    }
    y
}

/// Capacity `C = 1 − MSE(pred, target)/⟨target²⟩` (not clipped).
pub fn capacity(pred: &[f64], target: &[f64]) -> Result<f64> {
    if pred.len() != target.len() || target.is_empty() {
        return Err(Error::DimensionMismatch { expected: target.len(), actual: pred.len() });
    }
    let power = target.iter().map(|y| y * y).sum::<f64>() / target.len() as f64;
    if power <= 0.0 {
        return Err(Error::ZeroPowerTarget);
    }
    let mse = pred
        .iter()
        .zip(target)
        .map(|(p, t)| (p - t) * (p - t))
        .sum::<f64>()
        / target.len() as f64;
    Ok(1.0 - mse / power)
}

/// Train weights (readout columns + bias) against a target on the train
/// rows of a readout matrix. Exposed for the shift-register oracle tests;
/// [`total_ipc`] drives the same machinery internally.
pub fn train_readout(x_train: &ReadoutMatrix, target: &[f64]) -> Result<Vec<f64>> {
    if target.iter().all(|&y| y == 0.0) {
        return Err(Error::ZeroPowerTarget);
    }
    let solver = LstsqSolver::new(
        &with_bias(x_train.data(), x_train.rows(), x_train.cols()),
        x_train.rows(),
        x_train.cols() + 1,
    )?;
    Ok(solver.solve(target))
}

fn with_bias(data: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(rows * (cols + 1));
    for r in 0..rows {
        out.extend_from_slice(&data[r * cols..(r + 1) * cols]);
        out.push(1.0);
    }
    out
}

/// Enumeration and thresholding policy.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IpcConfig {
    /// Highest total degree probed.
    pub d_max: u32,
    /// Degree-1 targets probe every delay up to this cap.
    pub degree1_delay_cap: u32,
    /// Base-delay cap for families of degree >= 2.
    pub base_delay_cap: u32,
    /// Largest window spread (max delay − min delay) for degree >= 2.
    pub spread_cap: u32,
    /// A family stops sliding its base delay after this many consecutive
    /// below-threshold targets.
    pub stop_after: u32,
    /// Evaluation budget per degree; enumeration of a degree halts there and
    /// the report flags it as truncated.
    pub degree_eval_budget: usize,
    /// Cyclically shifted surrogate targets per candidate.
    pub surrogates: usize,
    /// Minimum cyclic shift of a surrogate.
    pub min_shift: usize,
    /// Seed of the surrogate-shift streams.
    pub seed: u64,
}

impl Default for IpcConfig {
    fn default() -> Self {
        Self {
            d_max: 6,
            degree1_delay_cap: 200,
            base_delay_cap: 100,
            spread_cap: 25,
            stop_after: 5,
            degree_eval_budget: 2000,
            surrogates: 20,
            min_shift: 100,
            seed: 0,
        }
    }
}

/// Readout/input pairing handed to [`total_ipc`].
pub struct IpcInput<'a> {
    /// 2L rows: the first `train_len` train, the next `train_len` test.
    pub readout: &'a ReadoutMatrix,
    /// Full input sequence, including wash-out.
    pub inputs: &'a [f64],
    /// Row `r`'s delay-`i` input is `inputs[first_row_t0 + r − i]`; for a
    /// reservoir run recorded after ζ wash-out steps this is ζ + 1.
    pub first_row_t0: usize,
    pub train_len: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TargetRecord {
    pub spec: TargetSpec,
    pub degree: u32,
    pub capacity: f64,
    pub threshold: f64,
    pub retained: bool,
}

/// Degree-resolved capacities of one readout matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CapacityReport {
    /// Every evaluated target, in evaluation order.
    pub records: Vec<TargetRecord>,
    /// `degree_capacity[d-1]` = Σ retained capacities of total degree d.
    pub degree_capacity: Vec<f64>,
    pub total: f64,
    /// Output-function count M (readout columns, multiplexing included).
    pub m: usize,
    /// `total / m`.
    pub normalized: f64,
    pub evaluations_per_degree: Vec<usize>,
    /// Degrees whose enumeration hit the evaluation budget.
    pub truncated_degrees: Vec<u32>,
    pub threshold_policy: String,
}

impl CapacityReport {
    pub fn degree_total(&self, degree: u32) -> f64 {
        self.degree_capacity.get(degree as usize - 1).copied().unwrap_or(0.0)
    }

    /// Retained capacity in odd total degrees.
    pub fn odd_degree_capacity(&self) -> f64 {
        self.degree_capacity
            .iter()
            .enumerate()
            .filter(|(i, _)| (i + 1) % 2 == 1)
            .map(|(_, c)| c)
            .sum()
    }

    /// Sum of thresholds over retained odd-degree targets; odd capacity at
    /// or below twice this level is indistinguishable from threshold noise.
    pub fn odd_degree_threshold_sum(&self) -> f64 {
        self.records
            .iter()
            .filter(|r| r.retained && r.degree % 2 == 1)
            .map(|r| r.threshold)
            .sum()
    }

    pub fn odd_degrees_suppressed(&self) -> bool {
        self.odd_degree_capacity() <= 2.0 * self.odd_degree_threshold_sum()
    }

    /// Capacity not accounted for by the probed degrees, `M − I_tot`.
    pub fn unexplained(&self) -> f64 {
        (self.m as f64 - self.total).max(0.0)
    }
}

struct Scorer<'a> {
    solver: LstsqSolver,
    input: &'a IpcInput<'a>,
    test_rows: Vec<&'a [f64]>,
    cfg: &'a IpcConfig,
}

impl<'a> Scorer<'a> {
    fn new(input: &'a IpcInput<'a>, cfg: &'a IpcConfig) -> Result<Self> {
        let x = input.readout;
        let l = input.train_len;
        if x.rows() < 2 * l || l == 0 {
            return Err(Error::InsufficientData(format!(
                "need 2 x {l} readout rows for equal train/test halves, got {}",
                x.rows()
            )));
        }
        let train = with_bias(&x.data()[..l * x.cols()], l, x.cols());
        let solver = LstsqSolver::new(&train, l, x.cols() + 1)?;
        let test_rows = (l..2 * l).map(|r| x.row(r)).collect();
        Ok(Self { solver, input, test_rows, cfg })
    }

    fn capacity_of(&self, target: &[f64]) -> f64 {
        let l = self.input.train_len;
        let w = self.solver.solve(&target[..l]);
        let bias = w[w.len() - 1];
        let test = &target[l..];
        let mut mse = 0.0;
        let mut power = 0.0;
        for (row, &t) in self.test_rows.iter().zip(test) {
            let mut p = bias;
            for (x, wi) in row.iter().zip(&w) {
                p += x * wi;
            }
            let e = p - t;
            mse += e * e;
            power += t * t;
        }
        if power <= 0.0 {
            return 0.0;
        }
        1.0 - mse / power
    }

    /// Score one target against its surrogate threshold.
    fn evaluate(&self, spec: &TargetSpec) -> TargetRecord {
        let l = self.input.train_len;
        let full = build_target_rows(spec, self.input.inputs, self.input.first_row_t0, 2 * l);
        let cap = self.capacity_of(&full);

        let mut rng = stream(self.cfg.seed, &format!("surrogate/{spec}"));
        let lo = self.cfg.min_shift;
        let hi = 2 * l - self.cfg.min_shift;
        let mut shifted = vec![0.0; 2 * l];
        let mut mean = 0.0;
        let mut m2 = 0.0;
        for i in 0..self.cfg.surrogates {
            let shift = rng.random_range(lo..hi);
            for (r, dst) in shifted.iter_mut().enumerate() {
                *dst = full[(r + shift) % (2 * l)];
            }
            let c = self.capacity_of(&shifted);
            let delta = c - mean;
            mean += delta / (i + 1) as f64;
            m2 += delta * (c - mean);
        }
        let sd = if self.cfg.surrogates > 1 {
            (m2 / (self.cfg.surrogates - 1) as f64).sqrt()
        } else {
            0.0
        };
        let threshold = mean + 3.0 * sd;
        let retained = cap > threshold && cap > 0.0;
        TargetRecord {
            spec: spec.clone(),
            degree: spec.total_degree(),
            capacity: cap,
            threshold,
            retained,
        }
    }
}

/// Ordered compositions of `total` into `parts` positive integers.
fn compositions(total: u32, parts: u32) -> Vec<Vec<u32>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 1..=(total - parts + 1) {
        for rest in compositions(total - first, parts - 1) {
            let mut v = Vec::with_capacity(parts as usize);
            v.push(first);
            v.extend(rest);
            out.push(v);
        }
    }
    out
}

/// Strictly increasing offset patterns `0 = o_1 < … < o_m = spread`.
fn offset_patterns(m: u32, spread: u32) -> Vec<Vec<u32>> {
    match m {
        1 => {
            if spread == 0 {
                vec![vec![0]]
            } else {
                vec![]
            }
        }
        2 => {
            if spread >= 1 {
                vec![vec![0, spread]]
            } else {
                vec![]
            }
        }
        _ => {
            // choose m-2 interior offsets from 1..spread
            let interior: Vec<u32> = (1..spread).collect();
            let mut out = Vec::new();
            let mut idx = vec![0usize; (m - 2) as usize];
            if interior.len() < idx.len() {
                return out;
            }
            // initialize the first combination 0,1,2,..
            for (i, v) in idx.iter_mut().enumerate() {
                *v = i;
            }
            loop {
                let mut pat = Vec::with_capacity(m as usize);
                pat.push(0);
                pat.extend(idx.iter().map(|&i| interior[i]));
                pat.push(spread);
                out.push(pat);
                // next combination
                let k = idx.len();
                let mut i = k;
                loop {
                    if i == 0 {
                        return out;
                    }
                    i -= 1;
                    if idx[i] != i + interior.len() - k {
                        break;
                    }
                }
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
    }
}

/// Enumerate, score and aggregate capacities for one readout matrix.
///
/// Degree 1 probes every delay up to the cap. For higher degrees, a family
/// is a degree composition on a window of delay offsets; the base delay
/// slides upward until `stop_after` consecutive targets fall below their
/// thresholds, and window spreads stop growing after two consecutive empty
/// spread levels. Evaluation order never affects the retained set: every
/// target is scored against its own named surrogate stream.
pub fn total_ipc(input: &IpcInput, cfg: &IpcConfig) -> Result<CapacityReport> {
    if cfg.d_max < 1 {
        return Err(Error::InvalidParameter("d_max must be >= 1".into()));
    }
    if input.first_row_t0 < cfg.degree1_delay_cap.max(cfg.base_delay_cap + cfg.spread_cap) as usize
    {
        return Err(Error::InsufficientData(format!(
            "first_row_t0 = {} gives insufficient history for delays up to {}",
            input.first_row_t0,
            cfg.degree1_delay_cap.max(cfg.base_delay_cap + cfg.spread_cap)
        )));
    }
    if 2 * cfg.min_shift >= 2 * input.train_len {
        return Err(Error::InvalidParameter("min_shift too large for the data".into()));
    }
    let scorer = Scorer::new(input, cfg)?;

    let mut records: Vec<TargetRecord> = Vec::new();
    let mut degree_capacity = vec![0.0; cfg.d_max as usize];
    let mut evals = vec![0usize; cfg.d_max as usize];
    let mut truncated = Vec::new();

    // degree 1: plain delay sweep
    for delay in 1..=cfg.degree1_delay_cap {
        let spec = TargetSpec::new(vec![(delay, 1)])?;
        let rec = scorer.evaluate(&spec);
        evals[0] += 1;
        if rec.retained {
            degree_capacity[0] += rec.capacity;
        }
        records.push(rec);
    }

    for d in 2..=cfg.d_max {
        let di = (d - 1) as usize;
        let mut budget_hit = false;
        'degree: for m in 1..=d {
            let comps = compositions(d, m);
            let mut empty_spreads = 0u32;
            for spread in (m - 1)..=cfg.spread_cap {
                let mut hit_at_spread = false;
                for offsets in offset_patterns(m, spread) {
                    for comp in &comps {
                        let mut misses = 0u32;
                        for base in 1..=cfg.base_delay_cap {
                            if evals[di] >= cfg.degree_eval_budget {
                                budget_hit = true;
                                break 'degree;
                            }
                            let terms: Vec<(u32, u32)> = offsets
                                .iter()
                                .zip(comp)
                                .map(|(&o, &deg)| (base + o, deg))
                                .collect();
                            let spec = TargetSpec::new(terms)?;
                            let rec = scorer.evaluate(&spec);
                            evals[di] += 1;
                            let retained = rec.retained;
                            if retained {
                                degree_capacity[di] += rec.capacity;
                                hit_at_spread = true;
                                misses = 0;
                            } else {
                                misses += 1;
                            }
                            records.push(rec);
                            if misses >= cfg.stop_after {
                                break;
                            }
                        }
                    }
                }
                if hit_at_spread {
                    empty_spreads = 0;
                } else {
                    empty_spreads += 1;
                    if empty_spreads >= 2 {
                        break;
                    }
                }
            }
        }
        if budget_hit {
            truncated.push(d);
        }
    }

    let total: f64 = degree_capacity.iter().sum();
    let m_count = input.readout.cols();
    Ok(CapacityReport {
        records,
        degree_capacity,
        total,
        m: m_count,
        normalized: total / m_count as f64,
        evaluations_per_degree: evals,
        truncated_degrees: truncated,
        threshold_policy: format!(
            "cyclic surrogates R={}, mean+3sd, min shift {}",
            cfg.surrogates, cfg.min_shift
        ),
    })
}
