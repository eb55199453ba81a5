//! Counter-based random streams.
//!
//! Each walker owns the ChaCha8 stream selected by its index under the
//! master seed. ChaCha is a keyed counter-mode generator, so stream `i`
//! never depends on how many numbers other streams consumed.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Name reported in run metadata.
pub const RNG_NAME: &str = "chacha8/seed_from_u64+stream";

/// The random stream for `(seed, index)`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform on `[-1, 1)` with 53 random bits.
#[inline]
pub fn uniform_symmetric<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    let bits = rng.next_u64() >> 11;
    (bits as f64) * (2.0 / (1u64 << 53) as f64) - 1.0
}

/// Two independent uniforms on `(-1, 1)` with 32 random bits each, from a
/// single 64-bit draw. Symmetric about zero and never exactly `+-1`.
#[inline]
pub fn uniform_symmetric_pair<R: RngCore + ?Sized>(rng: &mut R) -> (f64, f64) {
    const SCALE: f64 = 1.0 / (1u64 << 31) as f64;
    let w = rng.next_u64();
    let hi = (w >> 32) as f64;
    let lo = (w & 0xffff_ffff) as f64;
    ((hi + 0.5) * SCALE - 1.0, (lo + 0.5) * SCALE - 1.0)
}
