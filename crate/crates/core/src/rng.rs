//! Seeding and random streams.
//!
//! Everything random in the crate is a pure function of a 64-bit seed. Edge
//! draws in `G(n, p)` use a counter-indexed generator so that a pair's draw
//! depends on its rank only, never on iteration order.

use rand::RngCore;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: a bijective 64-bit avalanche mix.
#[inline]
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `index` of an experiment.
///
/// `mix64(master ^ index * GOLDEN)`. Both steps are bijections on `u64`, so
/// distinct indices always give distinct seeds.
#[inline]
pub const fn derive_trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    mix64(master_seed ^ trial_index.wrapping_mul(GOLDEN))
}

/// Draw number `counter` of the stream keyed by `seed`.
#[inline]
pub const fn counter_draw(seed: u64, counter: u64) -> u64 {
    CounterStream::new(seed).draw(counter)
}

/// Random-access stream: draw `i` is `mix64(mix64(seed) + (i + 1) * GOLDEN)`.
#[derive(Clone, Copy, Debug)]
pub struct CounterStream {
    key: u64,
}

impl CounterStream {
    pub const fn new(seed: u64) -> Self {
        CounterStream { key: mix64(seed) }
    }

    #[inline]
    pub const fn draw(&self, counter: u64) -> u64 {
        mix64(
            self.key
                .wrapping_add(counter.wrapping_add(1).wrapping_mul(GOLDEN)),
        )
    }
}

/// Maps a 64-bit draw to a uniform double in `[0, 1)` with 53 bits of precision.
#[inline]
pub fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Sequential SplitMix64 stream.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: mix64(seed) }
    }
}

impl RngCore for SplitMix64 {
    fn next_u32(&mut self) -> u32 {
        (self.next_u64() >> 32) as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let bytes = self.next_u64().to_le_bytes();
            chunk.copy_from_slice(&bytes[..chunk.len()]);
        }
    }
}
