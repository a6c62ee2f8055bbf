//! Per-replication random streams.
//!
//! Replication `i` of an experiment seeded with `seed` draws from ChaCha8
//! keyed by `seed` on stream `i`, so its variates do not depend on which
//! worker runs it or in which order.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::special::normal_quantile_unchecked;

pub fn replication_rng(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

/// Uniform on the open interval (0, 1): a 53-bit grid shifted by half a step.
pub fn uniform_open(rng: &mut impl RngCore) -> f64 {
    const STEP: f64 = 1.0 / (1u64 << 53) as f64;
    ((rng.next_u64() >> 11) as f64 + 0.5) * STEP
}

/// Standard normal by inversion.
pub fn standard_normal(rng: &mut impl RngCore) -> f64 {
    normal_quantile_unchecked(uniform_open(rng))
}
