//! Seeded random streams.
//!
//! Every stochastic routine draws from ChaCha8 seeded with a `u64`. Indices
//! are sampled as `u64` so results do not depend on the platform word size.
//! Sample `i` of a run with base seed `s` uses the stream `s + i`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

pub fn stream(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of the `i`-th sample derived from `base` (wrapping).
pub fn sample_seed(base: u64, i: u64) -> u64 {
    base.wrapping_add(i)
}

/// Uniform index in `0..n`; `n` must be positive.
pub fn index(rng: &mut Stream, n: usize) -> usize {
    rng.gen_range(0..n as u64) as usize
}

/// Fisher-Yates shuffle using [`index`].
pub fn shuffle<T>(rng: &mut Stream, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = index(rng, i + 1);
        items.swap(i, j);
    }
}

/// Uniform real in `[0, 1)`.
pub fn unit(rng: &mut Stream) -> f64 {
    rng.gen::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<usize> = {
            let mut r = stream(7);
            (0..16).map(|_| index(&mut r, 1000)).collect()
        };
        let b: Vec<usize> = {
            let mut r = stream(7);
            (0..16).map(|_| index(&mut r, 1000)).collect()
        };
        assert_eq!(a, b);
        let mut v: Vec<u32> = (0..20).collect();
        shuffle(&mut stream(3), &mut v);
        let mut sorted = v.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..20).collect::<Vec<_>>());
        assert_eq!(sample_seed(u64::MAX, 1), 0);
    }
}
