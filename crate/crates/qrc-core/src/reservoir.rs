//! The erase-and-write reservoir map and its observable readout.
//!
//! One input step is: encode `s_k ∈ [0,1]` into a single-qubit state, replace
//! qubit 1 by it (`ρ' = ρ₁(s_k) ⊗ Tr₁ ρ`), let the system evolve for ΔT under
//! the (possibly noisy) dynamics, and measure a set of Pauli expectations
//! right before the next injection. After ζ wash-out steps the readout rows
//! are recorded into a data matrix; Gaussian noise of width σ̄ models the
//! finite measurement budget of a real experiment.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::linalg::planar::PlanarMatrix;
use crate::linalg::{CompiledObservable, DensityMatrix, PauliLetter, PauliString};
use crate::noise::{IntervalEvolver, NoiseSpec};
use crate::spin::{sample_hamiltonian, HamiltonianRealization, ModelParams};
use crate::streams::{standard_normal, stream};
use crate::{Error, Result};

/// Input encodings of `s ∈ [0,1]` into the first qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    /// Classical populations along z: `diag(1-s, s)`.
    MixedZ,
    /// Pure state `cos(πs/2)|0⟩ + sin(πs/2)|1⟩`.
    PureZ,
    /// Classical mixture of x eigenstates: `(1-s)|−⟩⟨−| + s|+⟩⟨+|`.
    MixedX,
    /// Pure state `cos(πs/2)|−⟩ + sin(πs/2)|+⟩`.
    PureX,
}

impl std::fmt::Display for Encoding {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Encoding::MixedZ => "mixed_z",
            Encoding::PureZ => "pure_z",
            Encoding::MixedX => "mixed_x",
            Encoding::PureX => "pure_x",
        };
        write!(f, "{s}")
    }
}

/// Encode one input value as a single-qubit density matrix.
pub fn encode_input(s: f64, encoding: Encoding) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InvalidParameter(format!("input s={s} outside [0, 1]")));
    }
    let c = |re: f64| Complex64::new(re, 0.0);
    let half_angle = 0.5 * std::f64::consts::PI * s;
    let (cos_h, sin_h) = (half_angle.cos(), half_angle.sin());
    let mat = match encoding {
        Encoding::MixedZ => {
            crate::linalg::ComplexMatrix::from_rows(&[vec![c(1.0 - s), c(0.0)], vec![c(0.0), c(s)]])
        }
        Encoding::PureZ => {
            return DensityMatrix::pure_state(&[c(cos_h), c(sin_h)]);
        }
        Encoding::MixedX => crate::linalg::ComplexMatrix::from_rows(&[
            vec![c(0.5), c(s - 0.5)],
            vec![c(s - 0.5), c(0.5)],
        ]),
        Encoding::PureX => {
            // cos(πs/2)|−⟩ + sin(πs/2)|+⟩ in the computational basis
            let a = std::f64::consts::FRAC_1_SQRT_2 * (cos_h + sin_h);
            let b = std::f64::consts::FRAC_1_SQRT_2 * (sin_h - cos_h);
            return DensityMatrix::pure_state(&[c(a), c(b)]);
        }
    };
    DensityMatrix::new(mat, 1)
}

/// Named observable sets from the readout layer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableSetKind {
    /// All single-qubit Z.
    Z,
    /// All Z_i Z_j pairs.
    Zz,
    /// Union of the previous two.
    ZPlusZz,
    /// All XX, XY, YX, YY pairs (everything off the computational axis).
    CrossXy,
    /// N chain-adjacent pairs (plus (1,3)) as ZZ and the same pairs as ZX.
    ZzPlusZx,
    /// Explicit Pauli strings.
    Custom(Vec<String>),
}

/// Observable set together with its time-multiplex factor V; the effective
/// readout dimension is `|set| · V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableSet {
    pub kind: ObservableSetKind,
    #[serde(default = "default_multiplex")]
    pub multiplex: u32,
}

fn default_multiplex() -> u32 {
    1
}

impl ObservableSet {
    pub fn new(kind: ObservableSetKind) -> Self {
        Self { kind, multiplex: 1 }
    }

    pub fn with_multiplex(kind: ObservableSetKind, v: u32) -> Self {
        Self { kind, multiplex: v }
    }

    /// The Pauli strings of the base set, in column order.
    pub fn strings(&self, n_qubits: usize) -> Result<Vec<PauliString>> {
        use PauliLetter::{X, Y, Z};
        let pairs = || {
            (0..n_qubits).flat_map(move |i| ((i + 1)..n_qubits).map(move |j| (i, j)))
        };
        let out = match &self.kind {
            ObservableSetKind::Z => (0..n_qubits)
                .map(|q| PauliString::single(n_qubits, q, Z))
                .collect::<Result<Vec<_>>>()?,
            ObservableSetKind::Zz => pairs()
                .map(|(i, j)| PauliString::pair(n_qubits, i, Z, j, Z))
                .collect::<Result<Vec<_>>>()?,
            ObservableSetKind::ZPlusZz => {
                let mut v = ObservableSet::new(ObservableSetKind::Z).strings(n_qubits)?;
                v.extend(ObservableSet::new(ObservableSetKind::Zz).strings(n_qubits)?);
                v
            }
            ObservableSetKind::CrossXy => {
                let mut v = Vec::new();
                for (la, lb) in [(X, X), (X, Y), (Y, X), (Y, Y)] {
                    for (i, j) in pairs() {
                        v.push(PauliString::pair(n_qubits, i, la, j, lb)?);
                    }
                }
                v
            }
            ObservableSetKind::ZzPlusZx => {
                if n_qubits < 3 {
                    return Err(Error::InvalidParameter(
                        "zz_plus_zx needs at least 3 qubits".into(),
                    ));
                }
                // chain pairs plus (1,3); the particular choice is a fixed
                // default and configurable through Custom.
                let mut sel: Vec<(usize, usize)> =
                    (0..n_qubits - 1).map(|i| (i, i + 1)).collect();
                sel.push((0, 2));
                let mut v = Vec::new();
                for (i, j) in &sel {
                    v.push(PauliString::pair(n_qubits, *i, Z, *j, Z)?);
                }
                for (i, j) in &sel {
                    v.push(PauliString::pair(n_qubits, *i, Z, *j, X)?);
                }
                v
            }
            ObservableSetKind::Custom(strings) => {
                let mut v = Vec::new();
                for s in strings {
                    let ps: PauliString = s.parse()?;
                    if ps.len() != n_qubits {
                        return Err(Error::DimensionMismatch {
                            expected: n_qubits,
                            actual: ps.len(),
                        });
                    }
                    if ps.weight() == 0 {
                        return Err(Error::InvalidParameter(
                            "observables must have at least one non-identity letter".into(),
                        ));
                    }
                    v.push(ps);
                }
                v
            }
        };
        Ok(out)
    }

    pub fn base_len(&self, n_qubits: usize) -> Result<usize> {
        Ok(self.strings(n_qubits)?.len())
    }

    /// Column count including multiplexing.
    pub fn total_len(&self, n_qubits: usize) -> Result<usize> {
        Ok(self.base_len(n_qubits)? * self.multiplex as usize)
    }
}

/// Everything one reservoir trajectory needs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelParams,
    /// Input interval ΔT.
    pub delta_t: f64,
    /// Wash-out steps ζ discarded from the readout.
    pub washout: usize,
    /// Recorded rows L.
    pub len: usize,
    pub encoding: Encoding,
    pub noise: NoiseSpec,
    pub observables: ObservableSet,
    /// Std-dev of the Gaussian measurement noise added by
    /// [`add_readout_noise`]; kept in the config for provenance.
    pub sigma_bar: f64,
    pub input_seed: u64,
    pub readout_noise_seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.model.validate()?;
        self.noise.validate()?;
        if self.len < 1 {
            return Err(Error::InvalidParameter("sequence length must be >= 1".into()));
        }
        if self.delta_t <= 0.0 {
            return Err(Error::InvalidParameter("delta_t must be > 0".into()));
        }
        if self.sigma_bar < 0.0 {
            return Err(Error::InvalidParameter("sigma_bar must be >= 0".into()));
        }
        if self.observables.multiplex < 1 {
            return Err(Error::InvalidParameter("multiplex factor must be >= 1".into()));
        }
        Ok(())
    }

    /// The input sequence for this run: ζ + L uniform draws on [0, 1).
    pub fn draw_inputs(&self) -> Vec<f64> {
        crate::streams::uniform_sequence(self.input_seed, "input", self.washout + self.len)
    }
}

/// Row-major readout matrix; rows are time steps, columns are (possibly
/// multiplexed) observable expectations.
#[derive(Clone, Debug)]
pub struct ReadoutMatrix {
    rows: usize,
    cols: usize,
    pub names: Vec<String>,
    data: Vec<f64>,
    pub noisy: bool,
}

impl ReadoutMatrix {
    pub fn new(names: Vec<String>, rows: usize, data: Vec<f64>, noisy: bool) -> Self {
        let cols = names.len();
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, names, data, noisy }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn at(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.cols + c]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Rows `lo..hi` as a new matrix.
    pub fn slice_rows(&self, lo: usize, hi: usize) -> ReadoutMatrix {
        assert!(lo <= hi && hi <= self.rows);
        ReadoutMatrix {
            rows: hi - lo,
            cols: self.cols,
            names: self.names.clone(),
            data: self.data[lo * self.cols..hi * self.cols].to_vec(),
            noisy: self.noisy,
        }
    }
}

#[derive(Clone, Default)]
pub struct RunOptions {
    /// Record the post-interval state for steps in this absolute range.
    pub log_states: Option<std::ops::Range<usize>>,
}

pub struct RunOutput {
    /// Noiseless readout, `len` rows.
    pub readout: ReadoutMatrix,
    pub final_state: DensityMatrix,
    /// `(step, state)` pairs for the requested log window.
    pub logged_states: Vec<(usize, DensityMatrix)>,
}

/// Replace qubit 1 of `rho` by `rho1`, keeping the marginal of the rest:
/// `ρ' = ρ₁ ⊗ Tr₁ ρ`.
pub fn inject_input(rho: &DensityMatrix, rho1: &DensityMatrix) -> Result<DensityMatrix> {
    if rho1.n_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 2, actual: rho1.dim() });
    }
    if rho.n_qubits() < 2 {
        return Err(Error::InvalidSubsystem);
    }
    rho1.tensor(&rho.partial_trace(0)?)
}

fn inject_planar(rho: &mut PlanarMatrix, rho1: &DensityMatrix, red: &mut PlanarMatrix) {
    let dim = rho.n;
    let half = dim / 2;
    debug_assert_eq!(red.n, half);
    for i in 0..half {
        for j in 0..half {
            let top = i * dim + j;
            let bot = (i + half) * dim + (j + half);
            red.re[i * half + j] = rho.re[top] + rho.re[bot];
            red.im[i * half + j] = rho.im[top] + rho.im[bot];
        }
    }
    let m = rho1.matrix();
    for a in 0..2 {
        for b in 0..2 {
            let z = m.at(a, b);
            for i in 0..half {
                for j in 0..half {
                    let dst = (a * half + i) * dim + (b * half + j);
                    let (rr, ri) = (red.re[i * half + j], red.im[i * half + j]);
                    rho.re[dst] = z.re * rr - z.im * ri;
                    rho.im[dst] = z.re * ri + z.im * rr;
                }
            }
        }
    }
}

/// Expectation values `Tr[Oρ]` for every observable of the base set.
pub fn measure_observables(rho: &DensityMatrix, set: &ObservableSet) -> Result<Vec<f64>> {
    let strings = set.strings(rho.n_qubits())?;
    Ok(strings.iter().map(|ps| ps.compile().expectation(rho.matrix())).collect())
}

/// Run the reservoir over `inputs` (length ζ + L), sampling a fresh disorder
/// realization from the config's model seed. The readout is noiseless;
/// feed it through [`add_readout_noise`] for the measured matrix.
pub fn run_reservoir(cfg: &RunConfig, inputs: &[f64]) -> Result<RunOutput> {
    let hr = sample_hamiltonian(&cfg.model)?;
    run_reservoir_on(&hr, cfg, inputs, None, &RunOptions::default())
}

/// [`run_reservoir`] with a shared Hamiltonian realization, optional initial
/// state (default: maximally mixed) and state logging.
pub fn run_reservoir_on(
    hr: &HamiltonianRealization,
    cfg: &RunConfig,
    inputs: &[f64],
    initial: Option<&DensityMatrix>,
    options: &RunOptions,
) -> Result<RunOutput> {
    cfg.validate()?;
    let n = cfg.model.n_qubits;
    let dim = 1usize << n;
    if inputs.len() != cfg.washout + cfg.len {
        return Err(Error::InsufficientData(format!(
            "expected {} inputs (washout {} + len {}), got {}",
            cfg.washout + cfg.len,
            cfg.washout,
            cfg.len,
            inputs.len()
        )));
    }
    let strings = cfg.observables.strings(n)?;
    let compiled: Vec<CompiledObservable> = strings.iter().map(PauliString::compile).collect();
    let v = cfg.observables.multiplex;
    let mut names = Vec::with_capacity(compiled.len() * v as usize);
    for j in 1..=v {
        for obs in &compiled {
            names.push(if v == 1 { obs.name.clone() } else { format!("{}@{}", obs.name, j) });
        }
    }

    let evolver = IntervalEvolver::new(hr, cfg.delta_t, &cfg.noise, v)?;
    let mut rho = match initial {
        Some(state) => {
            if state.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, actual: state.dim() });
            }
            PlanarMatrix::from_complex(state.matrix())
        }
        None => PlanarMatrix::from_complex(DensityMatrix::maximally_mixed(n).matrix()),
    };
    let mut scratch = PlanarMatrix::zeros(dim);
    let mut reduced = PlanarMatrix::zeros(dim / 2);

    let cols = names.len();
    let mut data = Vec::with_capacity(cfg.len * cols);
    let mut logged = Vec::new();

    for (k, &s) in inputs.iter().enumerate() {
        let rho1 = encode_input(s, cfg.encoding)?;
        inject_planar(&mut rho, &rho1, &mut reduced);
        let record = k >= cfg.washout;
        for _ in 0..v {
            evolver.evolve_block(&mut rho, &mut scratch);
            if record {
                for obs in &compiled {
                    data.push(obs.expectation_planar(&rho));
                }
            }
        }
        rho.hermitize();
        rho.renormalize_trace();
        if let Some(range) = &options.log_states {
            if range.contains(&k) {
                logged.push((k, DensityMatrix::from_matrix_unchecked(rho.to_complex(), n)));
            }
        }
    }

    let final_state = DensityMatrix::from_matrix_unchecked(rho.to_complex(), n);
    final_state.check_valid()?;
    Ok(RunOutput {
        readout: ReadoutMatrix::new(names, cfg.len, data, false),
        final_state,
        logged_states: logged,
    })
}

/// Convenience wrapper: run with multiplex factor `v` and return the readout.
pub fn multiplex_readout(cfg: &RunConfig, inputs: &[f64], v: u32) -> Result<ReadoutMatrix> {
    let mut cfg = cfg.clone();
    cfg.observables.multiplex = v;
    Ok(run_reservoir(&cfg, inputs)?.readout)
}

/// Add i.i.d. Gaussian noise of width `sigma` to every entry (the
/// finite-measurement model). Entries are perturbed in row-major order from
/// the named stream, so the result is reproducible and independent of how
/// the matrix is later split into train/test segments.
pub fn add_readout_noise(x: &ReadoutMatrix, sigma: f64, seed: u64) -> ReadoutMatrix {
    if sigma == 0.0 {
        return x.clone();
    }
    let mut rng = stream(seed, "readout-noise");
    let data = x.data().iter().map(|v| v + sigma * standard_normal(&mut rng)).collect();
    ReadoutMatrix::new(x.names.clone(), x.rows(), data, true)
}

/// Mean |⟨O⟩| over the recorded window for every 1- and 2-local Pauli string.
pub fn stationary_observable_stats(
    cfg: &RunConfig,
    inputs: &[f64],
) -> Result<Vec<(String, f64)>> {
    use PauliLetter::{X, Y, Z};
    let n = cfg.model.n_qubits;
    let mut strings: Vec<String> = Vec::new();
    for q in 0..n {
        for l in [X, Y, Z] {
            strings.push(PauliString::single(n, q, l)?.to_string());
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for la in [X, Y, Z] {
                for lb in [X, Y, Z] {
                    strings.push(PauliString::pair(n, i, la, j, lb)?.to_string());
                }
            }
        }
    }
    let mut cfg = cfg.clone();
    cfg.observables = ObservableSet::new(ObservableSetKind::Custom(strings));
    let out = run_reservoir(&cfg, inputs)?;
    let x = &out.readout;
    let means = (0..x.cols())
        .map(|c| {
            let mean = (0..x.rows()).map(|r| x.at(r, c).abs()).sum::<f64>() / x.rows() as f64;
            (x.names[c].clone(), mean)
        })
        .collect();
    Ok(means)
}
