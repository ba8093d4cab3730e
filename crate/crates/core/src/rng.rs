//! Counter-based deterministic random numbers.
//!
//! Each (seed, stream) pair defines a pure function index → u64, so any
//! sample is reproducible independently of evaluation order, chunking, or
//! thread count. The mixer is the 64-bit finalizer used by splitmix64,
//! driven along a Weyl sequence.

pub const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A keyed counter stream of i.i.d.-quality 64-bit words.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counter {
    base: u64,
}

impl Counter {
    pub fn new(seed: u64, stream: u64) -> Self {
        Counter { base: mix(seed ^ mix(stream.wrapping_mul(GOLDEN))) }
    }

    #[inline]
    pub fn u64_at(&self, index: u64) -> u64 {
        mix(self.base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    /// Uniform double in the open interval (0,1).
    #[inline]
    pub fn f64_at(&self, index: u64) -> f64 {
        ((self.u64_at(index) >> 11) as f64 + 0.5) * (1.0 / 9007199254740992.0)
    }
}
