//! Named, reproducible RNG streams.
//!
//! Every random quantity in an experiment is drawn from a stream addressed by
//! `(master seed, path)`, e.g. `("disorder/3")` or `("readout/w0/x/0.050/7")`.
//! Streams are independent of evaluation order and worker count, which is
//! what makes parallel sweeps bit-reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

/// SplitMix64 step; used only to expand `(seed, path)` into key material.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a 64-bit child seed from a master seed and a path label.
pub fn derive_seed(master: u64, path: &str) -> u64 {
    let mut state = master ^ 0xA076_1D64_78BD_642F;
    let mut acc = splitmix64(&mut state);
    for chunk in path.as_bytes().chunks(8) {
        let mut word = [0u8; 8];
        word[..chunk.len()].copy_from_slice(chunk);
        state ^= u64::from_le_bytes(word).wrapping_add(0x9E37_79B9_7F4A_7C15);
        acc ^= splitmix64(&mut state);
    }
    // fold in the length so "ab"/"" and "a"/"b" style splits cannot collide
    state ^= path.len() as u64;
    acc ^ splitmix64(&mut state)
}

/// A ChaCha12 generator for the stream `(master, path)`.
pub fn stream(master: u64, path: &str) -> ChaCha12Rng {
    let mut state = derive_seed(master, path);
    let mut key = [0u8; 32];
    for chunk in key.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// `len` uniform draws on [0, 1) from the named stream.
pub fn uniform_sequence(master: u64, path: &str, len: usize) -> Vec<f64> {
    let mut rng = stream(master, path);
    (0..len).map(|_| rng.random::<f64>()).collect()
}

/// One standard-normal draw (Box-Muller; consumes two uniforms).
pub fn standard_normal(rng: &mut ChaCha12Rng) -> f64 {
    loop {
        let u1: f64 = rng.random();
        if u1 <= f64::MIN_POSITIVE {
            continue;
        }
        let u2: f64 = rng.random();
        return (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos();
    }
}
