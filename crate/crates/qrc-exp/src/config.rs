//! Declarative experiment configuration.
//!
//! Configs are TOML trees mirroring [`ExperimentConfig`]; unknown keys are
//! rejected so that typos cannot silently fall back to defaults. Every
//! experiment requires an explicit master seed — there is no wall-clock
//! seeding anywhere.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};

use qrc_core::ipc::IpcConfig;
use qrc_core::noise::NoiseAxis;
use qrc_core::reservoir::{Encoding, ObservableSet, ObservableSetKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    PhaseDiagram,
    Correlations,
    Trajectories,
    Ipc,
    IpcVsCorrelations,
    StationaryStats,
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Self::PhaseDiagram => "phase-diagram",
            Self::Correlations => "correlations",
            Self::Trajectories => "trajectories",
            Self::Ipc => "ipc",
            Self::IpcVsCorrelations => "ipc-vs-correlations",
            Self::StationaryStats => "stationary-stats",
        };
        write!(f, "{s}")
    }
}

/// Run length presets: desk keeps every pipeline under laptop-scale budgets,
/// paper reproduces the published sequence lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Desk,
    Paper,
}

impl Scale {
    pub fn train_len(self) -> usize {
        match self {
            Scale::Desk => 10_000,
            Scale::Paper => 100_000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n_qubits: usize,
    pub h: f64,
    pub disorder_width: f64,
    #[serde(default)]
    pub symmetry_break: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_delta_t")]
    pub delta_t: f64,
    #[serde(default = "default_washout")]
    pub washout: usize,
    /// Train length L; test uses another L rows (L_t = L_uk).
    /// Overridden by `--scale`.
    #[serde(default)]
    pub train_len: Option<usize>,
    #[serde(default = "default_sigma_bar")]
    pub sigma_bar: f64,
    #[serde(default = "default_encoding")]
    pub encoding: Encoding,
    #[serde(default = "default_eta")]
    pub eta: u32,
}

fn default_delta_t() -> f64 {
    10.0
}
fn default_washout() -> usize {
    1000
}
fn default_sigma_bar() -> f64 {
    0.001
}
fn default_encoding() -> Encoding {
    Encoding::MixedZ
}
fn default_eta() -> u32 {
    qrc_core::noise::NoiseSpec::DEFAULT_ETA
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            delta_t: default_delta_t(),
            washout: default_washout(),
            train_len: None,
            sigma_bar: default_sigma_bar(),
            encoding: default_encoding(),
            eta: default_eta(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(default = "default_axes")]
    pub axes: Vec<NoiseAxis>,
    /// Flip probabilities per trotter sub-step; 0 rows are run noiselessly.
    #[serde(default = "default_p_grid")]
    pub p_err_grid: Vec<f64>,
}

fn default_axes() -> Vec<NoiseAxis> {
    vec![NoiseAxis::X, NoiseAxis::Z]
}

fn default_p_grid() -> Vec<f64> {
    vec![0.0, 0.001, 0.005, 0.01, 0.05]
}

impl Default for NoiseSection {
    fn default() -> Self {
        Self { axes: default_axes(), p_err_grid: default_p_grid() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservablesSection {
    pub set: ObservableSetKind,
    #[serde(default = "default_multiplex")]
    pub multiplex: u32,
}

fn default_multiplex() -> u32 {
    1
}

impl ObservablesSection {
    pub fn to_set(&self) -> ObservableSet {
        ObservableSet::with_multiplex(self.set.clone(), self.multiplex)
    }
}

impl Default for ObservablesSection {
    fn default() -> Self {
        Self { set: ObservableSetKind::Zz, multiplex: 1 }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseDiagramSection {
    pub h_values: Vec<f64>,
    pub w_values: Vec<f64>,
    /// Steps averaged for the stationary-coherence panel.
    #[serde(default = "default_coherence_window")]
    pub coherence_window: usize,
    /// Wash-out before the coherence window.
    #[serde(default = "default_washout")]
    pub coherence_washout: usize,
    #[serde(default)]
    pub spectral: qrc_core::spin::SpectralOptions,
}

fn default_coherence_window() -> usize {
    100
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationsSection {
    #[serde(default = "default_corr_washout")]
    pub washout: usize,
    #[serde(default = "default_coherence_window")]
    pub window: usize,
}

fn default_corr_washout() -> usize {
    500
}

impl Default for CorrelationsSection {
    fn default() -> Self {
        Self { washout: default_corr_washout(), window: default_coherence_window() }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoriesSection {
    /// Input injections in the dumped window.
    #[serde(default = "default_injections")]
    pub injections: usize,
    /// (disorder_width, axis, p_err) cells to dump.
    pub cells: Vec<TrajectoryCell>,
}

fn default_injections() -> usize {
    4
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryCell {
    pub disorder_width: f64,
    pub axis: NoiseAxis,
    pub p_err: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StationaryStatsSection {
    #[serde(default = "default_stationary_window")]
    pub window: usize,
    /// Encodings to tabulate.
    pub encodings: Vec<Encoding>,
}

fn default_stationary_window() -> usize {
    7000
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IpcSection {
    #[serde(flatten)]
    pub cfg: IpcConfig,
    /// Also write the per-target capacity table.
    #[serde(default)]
    pub dump_targets: bool,
}

impl Default for IpcSection {
    fn default() -> Self {
        Self { cfg: IpcConfig::default(), dump_targets: false }
    }
}

/// Root configuration for one experiment invocation.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub master_seed: u64,
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
    pub n_realizations: usize,
    pub model: ModelSection,
    #[serde(default)]
    pub run: RunSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub observables: ObservablesSection,
    #[serde(default)]
    pub ipc: IpcSection,
    #[serde(default)]
    pub phase_diagram: Option<PhaseDiagramSection>,
    #[serde(default)]
    pub correlations: Option<CorrelationsSection>,
    #[serde(default)]
    pub trajectories: Option<TrajectoriesSection>,
    #[serde(default)]
    pub stationary_stats: Option<StationaryStatsSection>,
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> anyhow::Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).context("parsing experiment config")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.n_realizations == 0 {
            bail!("n_realizations must be >= 1");
        }
        match self.kind {
            ExperimentKind::PhaseDiagram => {
                if self.phase_diagram.is_none() {
                    bail!("phase-diagram experiments need a [phase_diagram] section");
                }
            }
            ExperimentKind::Trajectories => {
                let t = self
                    .trajectories
                    .as_ref()
                    .ok_or_else(|| anyhow::anyhow!("trajectories experiments need a [trajectories] section"))?;
                if t.cells.is_empty() {
                    bail!("[trajectories] needs at least one cell");
                }
            }
            ExperimentKind::StationaryStats => {
                let s = self.stationary_stats.as_ref().ok_or_else(|| {
                    anyhow::anyhow!("stationary-stats experiments need a [stationary_stats] section")
                })?;
                if s.encodings.is_empty() {
                    bail!("[stationary_stats] needs at least one encoding");
                }
            }
            _ => {}
        }
        for &p in &self.noise.p_err_grid {
            if !(0.0..=0.5).contains(&p) {
                bail!("p_err {p} outside [0, 0.5]");
            }
        }
        Ok(())
    }

    /// Train length after applying an optional scale preset.
    pub fn train_len(&self, scale: Option<Scale>) -> usize {
        match (scale, self.run.train_len) {
            (Some(s), _) => s.train_len(),
            (None, Some(l)) => l,
            (None, None) => Scale::Desk.train_len(),
        }
    }

    /// Canonical serialized form used for hashing and the manifest.
    pub fn canonical_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}
