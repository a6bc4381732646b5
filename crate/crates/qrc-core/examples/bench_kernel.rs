use qrc_core::noise::{NoiseAxis, NoiseSpec};
use qrc_core::reservoir::*;
use qrc_core::spin::ModelParams;
use std::time::Instant;

fn main() {
    let cfg = RunConfig {
        model: ModelParams { n_qubits: 5, h: 1.0, disorder_width: 0.0, symmetry_break: 0.0, seed: 3 },
        delta_t: 10.0,
        washout: 100,
        len: 400,
        encoding: Encoding::MixedZ,
        noise: NoiseSpec { axis: NoiseAxis::X, p_err: 0.01, eta: 50 },
        observables: ObservableSet::new(ObservableSetKind::Zz),
        sigma_bar: 0.001,
        input_seed: 1,
        readout_noise_seed: 2,
    };
    let inputs = cfg.draw_inputs();
    let t0 = Instant::now();
    let out = run_reservoir(&cfg, &inputs).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    let steps = (cfg.washout + cfg.len) as f64;
    // per substep: 2 complex 32^3 matmuls = 2*4*32768 real madds = 524288 flop
    let flops = steps * 50.0 * 2.0 * 4.0 * 32768.0 * 2.0;
    println!("noisy: {} steps x 50 substeps in {:.2}s -> {:.1} Gflop/s, {:.1} ms/step",
        steps, dt, flops / dt / 1e9, dt / steps * 1e3);
    println!("  trace drift final: {:.2e}", (out.final_state.trace() - 1.0).abs());
    let per_traj_21000 = dt / steps * 21000.0;
    println!("  extrapolated 21000-step trajectory: {:.0}s", per_traj_21000);
}
