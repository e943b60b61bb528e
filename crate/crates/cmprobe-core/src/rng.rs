//! Counter-based pseudo-random values.
//!
//! The simulator's noise injection hashes `(seed, point index)` instead of
//! advancing shared state, so any grid point can be evaluated independently
//! (or in parallel) and still reproduce the sequential stream bit for bit.

/// SplitMix64 output for the given seed and counter.
pub fn mix(seed: u64, counter: u64) -> u64 {
    let mut z = seed.wrapping_add(counter.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform value in `[-1, 1)` derived from [`mix`].
pub fn symmetric_unit(seed: u64, counter: u64) -> f64 {
    unit(mix(seed, counter)) * 2.0 - 1.0
}

fn unit(bits: u64) -> f64 {
    // 53 mantissa bits -> [0, 1)
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Small stateful generator over the same stream, for tests and drivers.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    seed: u64,
    counter: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { seed, counter: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = mix(self.seed, self.counter);
        self.counter += 1;
        v
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        unit(self.next_u64())
    }

    /// Uniform in `[lo, hi)`.
    pub fn next_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Log-uniform in `[lo, hi)`; both bounds must be positive.
    pub fn next_log_in(&mut self, lo: f64, hi: f64) -> f64 {
        #[allow(unused_imports)]
        use num_traits::Float;
        (self.next_in(lo.ln(), hi.ln())).exp()
    }

    /// Uniform index in `0..n`.
    pub fn next_index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }
}
