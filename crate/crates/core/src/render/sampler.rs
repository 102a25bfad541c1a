//! Counter-based random numbers: every value is a pure function of its
//! coordinates, so results do not depend on scheduling.

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Random stream of one camera sample.
#[derive(Debug, Clone, Copy)]
pub struct SampleStream {
    key: u64,
}

/// Bounce index reserved for the pixel jitter.
pub const CAMERA_BOUNCE: u32 = u32::MAX;

impl SampleStream {
    pub fn new(seed: u64, x: u32, y: u32, sample: u32) -> Self {
        let mut h = mix(seed ^ 0x9e37_79b9_7f4a_7c15);
        h = mix(h ^ ((x as u64) << 32 | y as u64));
        h = mix(h ^ sample as u64);
        SampleStream { key: h }
    }

    /// Uniform in `[0, 1)` for the given bounce and dimension.
    #[inline]
    pub fn get(&self, bounce: u32, dim: u32) -> f64 {
        let h = mix(self.key ^ mix((bounce as u64) << 32 | dim as u64));
        (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_roughly_uniform() {
        let s = SampleStream::new(7, 3, 4, 5);
        assert_eq!(s.get(1, 2), SampleStream::new(7, 3, 4, 5).get(1, 2));
        assert_ne!(s.get(1, 2), SampleStream::new(7, 4, 3, 5).get(1, 2));
        let n = 100_000;
        let mean: f64 = (0..n).map(|i| SampleStream::new(1, i, 0, 0).get(0, 0)).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.005);
    }
}
