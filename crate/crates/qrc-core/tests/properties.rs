//! Cross-module invariants: state validity through composite maps, the
//! entropic identities, echo-state convergence, and the IPC machinery
//! against synthetic readouts with known capacity.

use num_complex::Complex64;
use qrc_core::correlations::correlation_report;
use qrc_core::ipc::{total_ipc, IpcConfig, IpcInput};
use qrc_core::linalg::{ComplexMatrix, DensityMatrix};
use qrc_core::noise::{noisy_interval, NoiseAxis, NoiseSpec};
use qrc_core::reservoir::{
    add_readout_noise, encode_input, inject_input, run_reservoir_on, Encoding, ObservableSet,
    ObservableSetKind, ReadoutMatrix, RunConfig, RunOptions,
};
use qrc_core::spin::{sample_hamiltonian, ModelParams};
use qrc_core::streams::{standard_normal, stream, uniform_sequence};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

fn random_density(rng: &mut ChaCha12Rng, n_qubits: usize) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    // Ginibre: ρ = GG†/Tr
    let g = ComplexMatrix::from_fn(dim, |_, _| {
        Complex64::new(standard_normal(rng), standard_normal(rng))
    });
    let mut m = g.mul(&g.adjoint());
    let tr = m.trace().re;
    m = m.scale(Complex64::new(1.0 / tr, 0.0));
    m.hermitize();
    DensityMatrix::from_matrix_unchecked(m, n_qubits)
}

fn random_pure(rng: &mut ChaCha12Rng, n_qubits: usize) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    let amps: Vec<Complex64> =
        (0..dim).map(|_| Complex64::new(standard_normal(rng), standard_normal(rng))).collect();
    DensityMatrix::pure_state(&amps).unwrap()
}

#[test]
fn composite_maps_keep_states_valid() {
    let mut rng = stream(11, "cptp-sample");
    let params = ModelParams { n_qubits: 4, h: 1.0, disorder_width: 3.0, symmetry_break: 0.0, seed: 21 };
    let hr = sample_hamiltonian(&params).unwrap();
    for case in 0..60 {
        let rho = if case % 2 == 0 { random_density(&mut rng, 4) } else { random_pure(&mut rng, 4) };
        let axis = if case % 4 < 2 { NoiseAxis::X } else { NoiseAxis::Z };
        let p = rng.random_range(0.0..0.5);
        let spec = NoiseSpec { axis, p_err: p, eta: 10 };
        let rho1 = encode_input(rng.random::<f64>(), Encoding::MixedZ).unwrap();
        let injected = inject_input(&rho, &rho1).unwrap();
        let out = noisy_interval(&injected, &hr, 5.0, &spec).unwrap();
        assert!((out.trace() - 1.0).abs() < 1e-12, "trace case {case}");
        assert!(out.matrix().hermiticity_defect() < 1e-10, "hermiticity case {case}");
        assert!(out.min_eigenvalue() > -1e-9, "positivity case {case}");
    }
}

#[test]
fn entropic_identities_on_random_states() {
    let mut rng = stream(12, "identity-sample");
    for case in 0..150 {
        let n = 2 + (case % 4);
        let rho = if case % 3 == 0 { random_pure(&mut rng, n) } else { random_density(&mut rng, n) };
        let rep = correlation_report(&rho).unwrap();
        let lhs = rep.hookup;
        assert!(
            (lhs - (rep.mutual_information + rep.local_coherence)).abs() < 1e-9,
            "M = T + C_L failed on case {case}: {lhs} vs {}",
            rep.mutual_information + rep.local_coherence
        );
        assert!(
            (lhs - (rep.c_rel + rep.classical)).abs() < 1e-9,
            "M = C_rel + K failed on case {case}"
        );
        for v in rep.as_array() {
            assert!(v > -1e-9, "negative measure on case {case}: {v}");
        }
        assert!(rep.c_l1_normalized <= 1.0 + 1e-12);
    }
}

#[test]
fn negativity_complement_symmetry_on_random_states() {
    use qrc_core::linalg::eigvalsh;
    let mut rng = stream(13, "negativity-sym");
    for _ in 0..20 {
        let rho = random_density(&mut rng, 4);
        let neg = |subset: &[usize]| {
            let pt = rho.partial_transpose(subset).unwrap();
            let evals = eigvalsh(&pt).unwrap();
            0.5 * (evals.iter().map(|l| l.abs()).sum::<f64>() - 1.0)
        };
        assert!((neg(&[0, 2]) - neg(&[1, 3])).abs() < 1e-9);
        assert!((neg(&[0]) - neg(&[1, 2, 3])).abs() < 1e-9);
    }
}

#[test]
fn echo_state_forgets_initialization() {
    // Two runs from very different initial states, identical inputs: the
    // readouts coincide after a moderate wash-out in the ergodic regime.
    let params = ModelParams { n_qubits: 5, h: 1.0, disorder_width: 0.0, symmetry_break: 0.0, seed: 14 };
    let hr = sample_hamiltonian(&params).unwrap();
    let cfg = RunConfig {
        model: params,
        delta_t: 10.0,
        washout: 300,
        len: 30,
        encoding: Encoding::MixedZ,
        noise: NoiseSpec::noiseless(),
        observables: ObservableSet::new(ObservableSetKind::ZPlusZz),
        sigma_bar: 0.0,
        input_seed: 5,
        readout_noise_seed: 6,
    };
    let inputs = cfg.draw_inputs();
    let opts = RunOptions::default();
    let from_mixed = run_reservoir_on(&hr, &cfg, &inputs, None, &opts).unwrap();
    let zero = DensityMatrix::basis_state(5, 0);
    let from_zero = run_reservoir_on(&hr, &cfg, &inputs, Some(&zero), &opts).unwrap();
    let mut worst = 0.0f64;
    for (a, b) in from_mixed.readout.data().iter().zip(from_zero.readout.data()) {
        worst = worst.max((a - b).abs());
    }
    assert!(worst < 1e-6, "echo-state readout difference {worst:.2e}");
}

#[test]
fn engine_interval_equals_public_noisy_interval() {
    // One reservoir step done by hand must match the engine's row exactly.
    let params = ModelParams { n_qubits: 3, h: 1.0, disorder_width: 2.0, symmetry_break: 0.0, seed: 31 };
    let hr = sample_hamiltonian(&params).unwrap();
    let spec = NoiseSpec { axis: NoiseAxis::Z, p_err: 0.03, eta: 10 };
    let cfg = RunConfig {
        model: params,
        delta_t: 4.0,
        washout: 0,
        len: 1,
        encoding: Encoding::PureZ,
        noise: spec,
        observables: ObservableSet::new(ObservableSetKind::Z),
        sigma_bar: 0.0,
        input_seed: 7,
        readout_noise_seed: 8,
    };
    let inputs = vec![0.42];
    let out = run_reservoir_on(&hr, &cfg, &inputs, None, &RunOptions::default()).unwrap();

    let rho0 = DensityMatrix::maximally_mixed(3);
    let rho1 = encode_input(0.42, Encoding::PureZ).unwrap();
    let injected = inject_input(&rho0, &rho1).unwrap();
    let evolved = noisy_interval(&injected, &hr, 4.0, &spec).unwrap();
    let manual =
        qrc_core::reservoir::measure_observables(&evolved, &ObservableSet::new(ObservableSetKind::Z))
            .unwrap();
    for (a, b) in out.readout.row(0).iter().zip(&manual) {
        assert!((a - b).abs() < 1e-12, "engine {a} vs manual {b}");
    }
}

fn synthetic_ipc_input(
    readout_of: impl Fn(usize, &[f64]) -> Vec<f64>,
    m: usize,
    train_len: usize,
    t0: usize,
    seed: u64,
) -> (ReadoutMatrix, Vec<f64>) {
    let total = t0 + 2 * train_len;
    let inputs = uniform_sequence(seed, "oracle-input", total);
    let mut data = Vec::with_capacity(2 * train_len * m);
    for r in 0..2 * train_len {
        data.extend(readout_of(r, &inputs));
    }
    let names = (0..m).map(|c| format!("f{c}")).collect();
    (ReadoutMatrix::new(names, 2 * train_len, data, false), inputs)
}

#[test]
fn shift_register_oracle_saturates_degree_one() {
    // Readout row r = (s̃ at delays 1..m): linear memory machine. Degree 1
    // must retain capacity 1 for exactly the first m delays.
    let m = 5;
    let train_len = 2000;
    let t0 = 300;
    let (readout, inputs) = synthetic_ipc_input(
        |r, inp| (1..=m).map(|i| 2.0 * inp[t0 + r - i] - 1.0).collect(),
        m,
        train_len,
        t0,
        91,
    );
    let noisy = add_readout_noise(&readout, 1e-4, 17);
    let cfg = IpcConfig {
        degree1_delay_cap: 30,
        base_delay_cap: 30,
        spread_cap: 8,
        d_max: 3,
        seed: 5,
        ..IpcConfig::default()
    };
    let input = IpcInput { readout: &noisy, inputs: &inputs, first_row_t0: t0, train_len };
    let report = total_ipc(&input, &cfg).unwrap();
    assert!(
        (report.degree_total(1) - m as f64).abs() < 0.01,
        "I_1 = {}, want {m}",
        report.degree_total(1)
    );
    for d in 2..=3 {
        assert!(report.degree_total(d) < 0.05, "I_{d} = {}", report.degree_total(d));
    }
    assert!(report.total <= report.m as f64 + 1e-9);
    // the retained degree-1 targets are exactly delays 1..=m
    let retained: Vec<String> = report
        .records
        .iter()
        .filter(|r| r.retained && r.degree == 1)
        .map(|r| r.spec.to_string())
        .collect();
    assert_eq!(retained, (1..=m).map(|i| format!("{i}:1")).collect::<Vec<_>>());
}

#[test]
fn pure_noise_readout_scores_zero() {
    let m = 8;
    let train_len = 1500;
    let t0 = 300;
    let (readout, inputs) =
        synthetic_ipc_input(|_, _| vec![0.0; m], m, train_len, t0, 92);
    let noisy = add_readout_noise(&readout, 1e-3, 18);
    let cfg = IpcConfig {
        degree1_delay_cap: 40,
        base_delay_cap: 20,
        spread_cap: 6,
        d_max: 3,
        seed: 6,
        ..IpcConfig::default()
    };
    let input = IpcInput { readout: &noisy, inputs: &inputs, first_row_t0: t0, train_len };
    let report = total_ipc(&input, &cfg).unwrap();
    assert!(
        report.total < 0.02 * m as f64,
        "pure noise I_tot = {} (normalized {})",
        report.total,
        report.normalized
    );
}

#[test]
fn capacity_invariant_under_column_rescaling_and_duplication() {
    // a small reservoir readout; rescaling a column or duplicating one must
    // not move the total capacity.
    let params = ModelParams { n_qubits: 3, h: 1.0, disorder_width: 0.0, symmetry_break: 0.0, seed: 44 };
    let train_len = 800;
    let t0 = 251;
    let cfg = RunConfig {
        model: params,
        delta_t: 10.0,
        washout: t0 - 1,
        len: 2 * train_len,
        encoding: Encoding::MixedZ,
        noise: NoiseSpec::noiseless(),
        observables: ObservableSet::new(ObservableSetKind::Z),
        sigma_bar: 0.001,
        input_seed: 15,
        readout_noise_seed: 16,
    };
    let inputs = cfg.draw_inputs();
    let out = qrc_core::reservoir::run_reservoir(&cfg, &inputs).unwrap();
    let noisy = add_readout_noise(&out.readout, cfg.sigma_bar, cfg.readout_noise_seed);

    let ipc_cfg = IpcConfig {
        degree1_delay_cap: 20,
        base_delay_cap: 15,
        spread_cap: 5,
        d_max: 2,
        seed: 7,
        ..IpcConfig::default()
    };
    let base = total_ipc(
        &IpcInput { readout: &noisy, inputs: &inputs, first_row_t0: t0, train_len },
        &ipc_cfg,
    )
    .unwrap();

    // rescale column 0 by -3.5 and shift is absorbed by the bias column
    let mut scaled_data = noisy.data().to_vec();
    for r in 0..noisy.rows() {
        scaled_data[r * noisy.cols()] = -3.5 * scaled_data[r * noisy.cols()] + 0.2;
    }
    let scaled = ReadoutMatrix::new(noisy.names.clone(), noisy.rows(), scaled_data, true);
    let rescaled = total_ipc(
        &IpcInput { readout: &scaled, inputs: &inputs, first_row_t0: t0, train_len },
        &ipc_cfg,
    )
    .unwrap();
    assert!(
        (base.total - rescaled.total).abs() < 1e-6,
        "affine rescaling moved I_tot: {} vs {}",
        base.total,
        rescaled.total
    );

    // duplicate a column
    let mut dup_names = noisy.names.clone();
    dup_names.push("dup".into());
    let mut dup_data = Vec::with_capacity(noisy.rows() * (noisy.cols() + 1));
    for r in 0..noisy.rows() {
        dup_data.extend_from_slice(noisy.row(r));
        dup_data.push(noisy.at(r, 1));
    }
    let dup = ReadoutMatrix::new(dup_names, noisy.rows(), dup_data, true);
    let dup_report = total_ipc(
        &IpcInput { readout: &dup, inputs: &inputs, first_row_t0: t0, train_len },
        &ipc_cfg,
    )
    .unwrap();
    assert!(
        (base.total - dup_report.total).abs() < 1e-6,
        "duplicated column moved I_tot: {} vs {}",
        base.total,
        dup_report.total
    );
}

mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn partial_trace_preserves_trace(seed in 0u64..1000, qubit in 0usize..3) {
            let mut rng = stream(seed, "pt-prop");
            let rho = random_density(&mut rng, 3);
            let red = rho.partial_trace(qubit).unwrap();
            prop_assert!((red.trace() - 1.0).abs() < 1e-12);
            prop_assert!(red.matrix().hermiticity_defect() < 1e-12);
        }

        #[test]
        fn flip_channel_preserves_trace_for_any_p(seed in 0u64..1000, p in 0.0f64..=0.5) {
            let mut rng = stream(seed, "flip-prop");
            let rho = random_density(&mut rng, 2);
            for axis in [NoiseAxis::X, NoiseAxis::Z] {
                let out = qrc_core::noise::apply_flip_channel(&rho, axis, p, 1).unwrap();
                prop_assert!((out.trace() - 1.0).abs() < 1e-13);
                prop_assert!(out.min_eigenvalue() > -1e-10);
            }
        }

        #[test]
        fn unitary_group_property(seed in 0u64..500, t1 in 0.01f64..3.0, t2 in 0.01f64..3.0) {
            let params = ModelParams {
                n_qubits: 2, h: 1.0, disorder_width: 1.0, symmetry_break: 0.0, seed,
            };
            let hr = sample_hamiltonian(&params).unwrap();
            let u12 = hr.propagator(t1).mul(&hr.propagator(t2));
            let u_sum = hr.propagator(t1 + t2);
            prop_assert!(u12.max_abs_diff(&u_sum) < 1e-9);
        }
    }
}
