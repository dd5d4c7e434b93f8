//! Deterministic, splittable random streams.
//!
//! Every stream is a ChaCha8 generator keyed by `(master seed, SNR point,
//! batch)` with the ChaCha stream id selecting the purpose. Streams for
//! different keys or purposes never overlap, so the result of a batch does
//! not depend on which worker ran it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// What a stream is used for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Purpose {
    Bits = 1,
    Channel = 2,
    Noise = 3,
}

/// Builds the generator for `(master, point, batch, purpose)`.
pub fn stream(master: u64, point: u64, batch: u64, purpose: Purpose) -> SimRng {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&master.to_le_bytes());
    seed[8..16].copy_from_slice(&point.to_le_bytes());
    seed[16..24].copy_from_slice(&batch.to_le_bytes());
    seed[24..].copy_from_slice(b"imsim\0\0\0");
    let mut rng = ChaCha8Rng::from_seed(seed);
    rng.set_stream(purpose as u64);
    rng
}

/// Generator for ad-hoc use (tests, examples) from a single seed.
pub fn seeded(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}
