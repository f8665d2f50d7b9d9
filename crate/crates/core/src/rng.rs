//! Seeded random streams.
//!
//! Every run owns one [`Stream`] for operator draws and a second, independent
//! stream for objective noise, both derived from the run seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type Stream = ChaCha8Rng;

const OPERATOR_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

pub fn operator_stream(seed: u64) -> Stream {
    substream(seed, OPERATOR_STREAM)
}

pub fn noise_stream(seed: u64) -> Stream {
    substream(seed, NOISE_STREAM)
}

/// Independent stream number `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// The scalar draws the optimizer operators consume.
pub trait Draws {
    /// Uniform on `[0, 1)`.
    fn uniform(&mut self) -> f64;
    /// Standard normal.
    fn normal(&mut self) -> f64;
    /// Uniform index in `0..n`; `n > 0`.
    fn index(&mut self, n: usize) -> usize;

    /// Uniform on `[lo, hi)`.
    fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Fisher-Yates shuffle driven by [`Draws::index`].
    fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index(i + 1);
            items.swap(i, j);
        }
    }
}

impl<R: Rng> Draws for R {
    fn uniform(&mut self) -> f64 {
        self.random::<f64>()
    }

    fn normal(&mut self) -> f64 {
        StandardNormal.sample(self)
    }

    fn index(&mut self, n: usize) -> usize {
        self.random_range(0..n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<f64> = (0..4).map(|_| operator_stream(9).uniform()).collect();
        let mut s = operator_stream(9);
        let b: Vec<f64> = (0..4).map(|_| s.uniform()).collect();
        assert_eq!(a[0], b[0]);
        let mut n = noise_stream(9);
        assert_ne!(b[0], n.uniform());
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut s = operator_stream(3);
        let mut v: Vec<usize> = (0..17).collect();
        s.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..17).collect::<Vec<_>>());
    }
}
