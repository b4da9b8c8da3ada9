//! Seeded Monte-Carlo estimation of the sign correlation, used to prefilter
//! candidates before exact evaluation and as a floating-point sanity check.
//!
//! Streams are split per configuration: the ChaCha8 key is derived from
//! (seed, frequencies) with a splitmix64 absorb-and-expand, so estimates are
//! reproducible regardless of evaluation order or thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::Configuration;

/// Draws closer than this to a cosine zero are discarded and redrawn. The
/// excluded set has probability around n * 1e-12 per draw, far below the
/// statistical error at any feasible sample count.
const BOUNDARY_GUARD: f64 = 1e-12;

/// A Monte-Carlo estimate with its binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub samples: u64,
    pub stderr: f64,
    pub seed: u64,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_key(seed: u64, freqs: &[u64]) -> [u8; 32] {
    let mut state = seed;
    let mut acc = splitmix64(&mut state);
    for &f in freqs {
        state ^= f;
        acc = acc.rotate_left(23) ^ splitmix64(&mut state);
    }
    let mut key = [0u8; 32];
    let mut expand = acc;
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut expand).to_le_bytes());
    }
    key
}

/// Estimate P(config) from uniform draws on [0, 2*pi). Identical
/// (config, samples, seed) triples produce bit-identical estimates.
pub fn estimate(config: &Configuration, samples: u64, seed: u64) -> McEstimate {
    assert!(samples >= 1);
    let freqs = config.freqs();
    let mut rng = ChaCha8Rng::from_seed(stream_key(seed, freqs));
    let mut hits: u64 = 0;
    for _ in 0..samples {
        let agreeing = 'draw: loop {
            let x = rng.random::<f64>() * std::f64::consts::TAU;
            let mut any_pos = false;
            let mut any_neg = false;
            for &a in freqs {
                let c = (a as f64 * x).cos();
                if c.abs() < BOUNDARY_GUARD {
                    continue 'draw;
                }
                if c > 0.0 {
                    any_pos = true;
                } else {
                    any_neg = true;
                }
            }
            break !(any_pos && any_neg);
        };
        if agreeing {
            hits += 1;
        }
    }
    let estimate = hits as f64 / samples as f64;
    let stderr = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    McEstimate {
        estimate,
        samples,
        stderr,
        seed,
    }
}
