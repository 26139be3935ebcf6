//! Counter-based, splittable random streams.
//!
//! A stream is identified by `(master_seed, stream_id)`; the word produced
//! at position `counter` is a pure function of the triple. The keystream is
//! ChaCha8: the master seed expands to the 256-bit key, the stream id selects
//! the ChaCha stream and the counter is the block position. Handing every
//! walker/replicate pair its own stream id makes ensemble results independent
//! of how replicates are scheduled across threads.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Stable 64-bit key for an experiment label (FNV-1a followed by a mix).
pub fn experiment_key(label: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    mix64(h)
}

/// Stream id for one walker of one replicate of an experiment.
///
/// The id does not depend on the ensemble size, so walker `i` follows the
/// same path in a K-walker and a (K+1)-walker ensemble.
pub fn stream_id(experiment: u64, walker: u64, replicate: u64) -> u64 {
    let a = mix64(experiment.wrapping_add(GOLDEN_GAMMA));
    let b = mix64(a ^ walker.wrapping_mul(GOLDEN_GAMMA).wrapping_add(1));
    mix64(b ^ replicate.wrapping_mul(0xd6e8_feb8_6659_fd93).wrapping_add(2))
}

fn key_from_seed(master_seed: u64) -> [u8; 32] {
    let mut key = [0u8; 32];
    let mut state = master_seed;
    for chunk in key.chunks_exact_mut(8) {
        state = state.wrapping_add(GOLDEN_GAMMA);
        chunk.copy_from_slice(&mix64(state).to_le_bytes());
    }
    key
}

#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    counter: u64,
    core: ChaCha8Rng,
    bits: u64,
    bits_left: u32,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        Self::at(master_seed, stream_id, 0)
    }

    /// Positions the stream so that the next word is word number `counter`.
    pub fn at(master_seed: u64, stream_id: u64, counter: u64) -> Self {
        let mut core = ChaCha8Rng::from_seed(key_from_seed(master_seed));
        core.set_stream(stream_id);
        core.set_word_pos(u128::from(counter) * 2);
        Self {
            master_seed,
            stream_id,
            counter,
            core,
            bits: 0,
            bits_left: 0,
        }
    }

    pub fn for_walker(master_seed: u64, experiment: u64, walker: u64, replicate: u64) -> Self {
        Self::new(master_seed, stream_id(experiment, walker, replicate))
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    /// Number of 64-bit words consumed so far.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// Independent child stream under the same master seed.
    pub fn split(&self, child: u64) -> RngStream {
        RngStream::new(
            self.master_seed,
            mix64(self.stream_id ^ mix64(child.wrapping_add(GOLDEN_GAMMA))),
        )
    }

    #[inline]
    pub fn word(&mut self) -> u64 {
        self.counter += 1;
        self.core.next_u64()
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.word() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform integer in `[0, n)`, `n > 0` (Lemire's multiply-and-reject).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0)");
        if n.is_power_of_two() {
            return self.bits(n.trailing_zeros());
        }
        let threshold = n.wrapping_neg() % n;
        loop {
            let m = u128::from(self.word()) * u128::from(n);
            if (m as u64) >= threshold {
                return (m >> 64) as u64;
            }
        }
    }

    /// One fair bit.
    #[inline]
    pub fn bit(&mut self) -> bool {
        if self.bits_left == 0 {
            self.bits = self.word();
            self.bits_left = 64;
        }
        let b = self.bits & 1 == 1;
        self.bits >>= 1;
        self.bits_left -= 1;
        b
    }

    /// `k` fair bits packed into the low end of the result, `k <= 32`.
    #[inline]
    pub fn bits(&mut self, k: u32) -> u64 {
        debug_assert!(k <= 32);
        if k == 0 {
            return 0;
        }
        if self.bits_left < k {
            self.bits = self.word();
            self.bits_left = 64;
        }
        let v = self.bits & ((1u64 << k) - 1);
        self.bits >>= k;
        self.bits_left -= k;
        v
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.word() as u32
    }

    fn next_u64(&mut self) -> u64 {
        self.word()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        for chunk in dst.chunks_mut(8) {
            let w = self.word().to_le_bytes();
            chunk.copy_from_slice(&w[..chunk.len()]);
        }
    }
}
