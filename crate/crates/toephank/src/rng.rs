//! Tiny deterministic generator for experiment draws.
//!
//! The batch tool promises byte-identical outputs for identical configs, so
//! random draws go through this fixed splitmix64 stream rather than an
//! external RNG whose stream may change between versions.

use num_complex::Complex64;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `[lo, hi)`.
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform on the closed unit disk.
    pub fn unit_disk(&mut self) -> Complex64 {
        let r = self.next_f64().sqrt();
        let phi = self.range(0.0, std::f64::consts::TAU);
        Complex64::from_polar(r, phi)
    }
}
