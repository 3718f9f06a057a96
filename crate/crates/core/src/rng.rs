//! Seedable, portable random number generation.
//!
//! All sampling in this crate goes through [`SplitMix64`] so that a run is a
//! pure function of its seed and can be replicated from the algorithm name
//! alone. The identifier recorded in analysis reports is
//! [`RNG_ALGORITHM`].

/// Algorithm identifier written into reports produced from seeded runs.
pub const RNG_ALGORITHM: &str = "splitmix64";

/// SplitMix64 generator (Steele, Lea & Flood 2014; the `java.util.SplittableRandom`
/// finalizer). One 64-bit word of state, full 2^64 period.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw in `[0, 1)` using the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}
