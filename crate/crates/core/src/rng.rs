//! Seeded counter-based random number generation.
//!
//! Every random artifact in the library is a pure function of a `u64` seed
//! and a draw counter, so runs are reproducible across platforms and thread
//! counts. The generator hashes `seed + counter * phi` through the SplitMix64
//! finalizer; there is no mutable hidden state to thread through call sites,
//! and independent streams are derived by hashing a label into the seed.

const PHI: u64 = 0x9E37_79B9_7F4A_7C15;

fn finalize(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The i-th draw of the stream identified by `seed`.
pub fn draw(seed: u64, counter: u64) -> u64 {
    finalize(seed.wrapping_add(counter.wrapping_mul(PHI)).wrapping_add(PHI))
}

/// Seed for an independent child stream (used to separate, say, clause
/// sampling from position sampling under one user-facing seed).
pub fn derive(seed: u64, label: u64) -> u64 {
    finalize(seed ^ finalize(label.wrapping_mul(PHI) ^ 0x632B_E59B_D9B4_E019))
}

/// Maps a full-width draw to `0..bound` without rejection, via the high half
/// of a 64x64 fixed-point product. `bound` must be nonzero.
pub fn below(raw: u64, bound: u64) -> u64 {
    debug_assert!(bound > 0);
    ((raw as u128 * bound as u128) >> 64) as u64
}

/// Convenience stream wrapper: remembers the seed and the next counter.
#[derive(Clone, Debug)]
pub struct Stream {
    seed: u64,
    counter: u64,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = draw(self.seed, self.counter);
        self.counter += 1;
        v
    }

    pub fn next_below(&mut self, bound: u64) -> u64 {
        below(self.next_u64(), bound)
    }
}
