//! Seeded random-number plumbing.
//!
//! Every stochastic component draws from ChaCha8 streams keyed by
//! `(seed, stream)`, so ensembles and parallel reads are reproducible
//! regardless of scheduling. Gaussian draws go through an explicit
//! Box-Muller transform of the uniform output rather than a library
//! distribution, pinning generated instances to the ChaCha specification
//! alone.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// RNG for the given seed on the default stream.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// RNG for the given seed on an explicit stream. Distinct streams are
/// statistically independent.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform draw in `[0, 1)` with 53 bits of precision.
pub fn uniform01(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Standard normal draw via Box-Muller. Consumes exactly two uniforms.
pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1 = 1.0 - uniform01(rng); // (0, 1]: keeps ln() finite
    let u2 = uniform01(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Uniform random spin in {+1, -1}.
pub fn spin(rng: &mut ChaCha8Rng) -> i8 {
    if rng.next_u32() & 1 == 0 {
        1
    } else {
        -1
    }
}
