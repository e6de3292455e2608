//! Seeded pseudo-random numbers for reproducible sampling.
//!
//! The suites must produce byte-identical reports for a fixed seed, across
//! platforms and toolchain versions, so the generator is pinned here
//! instead of depending on an external crate whose stream may change.

/// SplitMix64 generator (Steele, Lea & Flood's mixing constants).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n`. `n` must be nonzero.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        self.next_u64() % n
    }

    /// Derive an independent stream, e.g. one per enumeration index, so
    /// results do not depend on scheduling order.
    pub fn fork(&self, tag: u64) -> SplitMix64 {
        let mut salted = SplitMix64::new(self.state ^ tag.wrapping_mul(0xA076_1D64_78BD_642F));
        salted.next_u64();
        salted
    }
}
