//! Deterministic counter-based random numbers.
//!
//! Every draw is a pure function of (master seed, realization index, stream
//! id, counter), so disorder realizations can be generated independently on
//! any worker in any order and still be bit-identical. The mixing function is
//! SplitMix64 applied to the combined key.

/// Stream ids keep independent random purposes from colliding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Potential = 1,
    Generic = 2,
}

#[derive(Clone, Debug)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl CounterRng {
    pub fn new(master_seed: u64, realization: u64, stream: Stream) -> Self {
        // fold the addressing tuple into one key with two mixing rounds
        let k = splitmix64(master_seed)
            ^ splitmix64(realization.wrapping_mul(0xA076_1D64_78BD_642F))
            ^ splitmix64((stream as u64).wrapping_mul(0xE703_7ED1_A0B4_28DB));
        CounterRng {
            key: splitmix64(k),
            counter: 0,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = splitmix64(self.key ^ self.counter.wrapping_mul(0xD6E8_FEB8_6659_FD93));
        self.counter += 1;
        v
    }

    /// Uniform on [0, 1) with 53-bit resolution.
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform on [lo, hi).
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Random index in [0, n).
    pub fn index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
