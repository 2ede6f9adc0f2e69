use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Seeded random stream used for every stochastic step (init, splits, solver order).
///
/// Backed by ChaCha8 seeded through `SeedableRng::seed_from_u64`, which is
/// specified bit-for-bit, so a seed yields the same sequence everywhere.
///
/// * `uniform` takes the top 53 bits of a `u64` draw: `(x >> 11) · 2⁻⁵³ ∈ [0, 1)`.
/// * `gaussian` is Box–Muller on two uniforms `u1, u2`:
///   `r = sqrt(-2 ln(1 - u1))`, yielding `r·cos(2πu2)` then, on the next call,
///   the cached `r·sin(2πu2)`.
/// * `below(n)` is rejection sampling on `u64` draws (no modulo bias).
/// * `shuffle` is Fisher–Yates from the last index down, using `below`.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    rng: ChaCha8Rng,
    spare_gaussian: Option<f64>,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare_gaussian: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare_gaussian.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare_gaussian = Some(r * angle.sin());
        r * angle.cos()
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "below(0) has no valid outcome");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let mut a = RandomStream::new(42);
        let mut b = RandomStream::new(42);
        for _ in 0..100 {
            assert_eq!(a.uniform().to_bits(), b.uniform().to_bits());
            assert_eq!(a.gaussian().to_bits(), b.gaussian().to_bits());
        }
    }

    #[test]
    fn different_seeds_differ() {
        let a: Vec<u64> = {
            let mut r = RandomStream::new(1);
            (0..4).map(|_| r.next_u64()).collect()
        };
        let mut r = RandomStream::new(2);
        let b: Vec<u64> = (0..4).map(|_| r.next_u64()).collect();
        assert_ne!(a, b);
    }

    #[test]
    fn shuffle_single_element_is_identity() {
        let mut v = vec![7];
        RandomStream::new(0).shuffle(&mut v);
        assert_eq!(v, vec![7]);
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut v: Vec<usize> = (0..50).collect();
        RandomStream::new(9).shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
        assert_ne!(v, sorted);
    }

    #[test]
    fn uniform_mean_near_half() {
        let mut r = RandomStream::new(2024);
        let n = 100_000;
        let mean = (0..n).map(|_| r.uniform()).sum::<f64>() / n as f64;
        assert!((0.49..=0.51).contains(&mean), "mean {mean}");
    }

    #[test]
    fn gaussian_moments() {
        let mut r = RandomStream::new(5);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| r.gaussian()).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.02);
        assert!((var - 1.0).abs() < 0.02);
    }

    #[test]
    fn below_stays_in_range() {
        let mut r = RandomStream::new(77);
        let mut seen = [false; 5];
        for _ in 0..1000 {
            seen[r.below(5) as usize] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
