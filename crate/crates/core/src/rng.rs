//! Deterministic random number streams for Monte Carlo runs.
//!
//! The generator is SplitMix64: state advances by the 64-bit golden-ratio
//! increment and each output is the finalizer
//!
//! ```text
//! z  = state + 0x9E3779B97F4A7C15          (wrapping)
//! z ^= z >> 30;  z *= 0xBF58476D1CE4E5B9   (wrapping)
//! z ^= z >> 27;  z *= 0x94D049BB133111EB   (wrapping)
//! out = z ^ (z >> 31)
//! ```
//!
//! It is fully specified by the two lines above, which keeps results
//! reproducible across platforms and easy to port. Parallel workers never
//! share a stream: every (channel realization, symbol slot) pair derives its
//! own stream from the master seed by hashing the index path, so the
//! aggregate result is independent of scheduling order.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A single-owner SplitMix64 stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RngStream {
    state: u64,
}

impl RngStream {
    pub fn from_seed(seed: u64) -> Self {
        RngStream { state: seed }
    }

    /// Derive an independent stream from `(master, path)`. Distinct paths
    /// give distinct initial states (collision probability ~2^-64), which is
    /// what makes per-trial parallelism deterministic.
    pub fn derive(master: u64, path: &[u64]) -> Self {
        let mut h = mix(master ^ GOLDEN);
        for &component in path {
            h = mix(h ^ mix(component.wrapping_add(GOLDEN)));
        }
        RngStream { state: h }
    }

    /// Derived stream collapsed to a plain seed, for APIs that take one.
    pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
        Self::derive(master, path).state
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random mantissa bits.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        const SCALE: f64 = 1.0 / (1u64 << 53) as f64;
        (self.next_u64() >> 11) as f64 * SCALE
    }

    /// Uniform index in `0..m`. Exact (bias-free) when `m` is a power of two,
    /// which covers every PSK order this crate supports.
    #[inline]
    pub fn index(&mut self, m: usize) -> usize {
        debug_assert!(m.is_power_of_two());
        (self.next_u64() % m as u64) as usize
    }

    /// One Box-Muller pair of independent standard normal variates.
    ///
    /// `u1` is mapped to `(0, 1]` as `1 - uniform()` so the logarithm is
    /// always finite.
    #[inline]
    pub fn standard_normal_pair(&mut self) -> (f64, f64) {
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        (radius * angle.cos(), radius * angle.sin())
    }

    /// Standard circularly-symmetric complex Gaussian: `(g1 + j g2) / sqrt(2)`
    /// with unit total variance.
    #[inline]
    pub fn standard_complex_gaussian(&mut self) -> (f64, f64) {
        let (g1, g2) = self.standard_normal_pair();
        (g1 * std::f64::consts::FRAC_1_SQRT_2, g2 * std::f64::consts::FRAC_1_SQRT_2)
    }

    #[cfg(test)]
    fn state(&self) -> u64 {
        self.state
    }
}
