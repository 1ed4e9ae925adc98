//! Reproducible Monte Carlo sampling of the slope random walk.
//!
//! Generator identity is pinned for reproducibility across releases:
//! ChaCha12, re-seeded for every chunk of 65536 walks by a SplitMix64 mix
//! of the user seed and the chunk index. Because each chunk's stream
//! depends only on `(seed, chunk index)`, partitioning chunks across
//! workers cannot change the estimate; sequential and concurrent runs
//! produce identical results.
//!
//! A single step samples the block index by inverse CDF on the cumulative
//! ranks: a uniform integer in `[0, r)` falls in block `i` with probability
//! exactly `r_i / r`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::data::HNData;
use crate::prob::scaled_slopes;
use crate::rational::Rational;

const CHUNK: u64 = 1 << 16;

/// Empirical summary of `n` sampled walks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkEstimate {
    /// Fraction of walks with `Z_m ≥ z`.
    pub empirical_tail: f64,
    /// Mean of `Z_m / m` across the walks.
    pub empirical_mean: f64,
}

/// Samples `n_samples` independent `m`-step walks and reports the empirical
/// tail frequency at `z` and the empirical mean step value.
///
/// Deterministic given `seed`.
pub fn sample_walk(
    data: &HNData,
    m: u32,
    z: &Rational,
    n_samples: u64,
    seed: u64,
) -> WalkEstimate {
    assert!(m >= 1, "walk length must be positive");
    assert!(n_samples >= 1, "need at least one sample");

    let scaled = scaled_slopes(data);
    let threshold = (z * Rational::from_integer(scaled.scale.clone()))
        .ceil()
        .to_integer();

    // Walk sums stay in i128 whenever every scaled slope fits i64
    // (|sum| ≤ m·2^63 < 2^96); otherwise fall back to big integers.
    let small: Option<Vec<i64>> = scaled.values.iter().map(|v| v.to_i64()).collect();

    let mut cumulative_ranks = Vec::with_capacity(data.len());
    let mut acc = 0u64;
    for &rank in data.ranks() {
        acc += rank;
        cumulative_ranks.push(acc);
    }
    let total_rank = acc;

    let mut tail_hits = 0u64;
    let mut grand_sum = BigInt::from(0);
    let mut remaining = n_samples;
    let mut chunk_index = 0u64;
    while remaining > 0 {
        let batch = remaining.min(CHUNK);
        let mut rng = ChaCha12Rng::seed_from_u64(chunk_seed(seed, chunk_index));
        match &small {
            Some(values) => {
                let min_sum = m as i128 * *values.last().unwrap() as i128;
                let max_sum = m as i128 * *values.first().unwrap() as i128;
                // Clamp the threshold into the attainable range ± 1.
                let threshold_small = if threshold > BigInt::from(max_sum) {
                    max_sum + 1
                } else if threshold <= BigInt::from(min_sum) {
                    min_sum
                } else {
                    threshold.to_i128().expect("threshold within walk range")
                };
                let mut chunk_sum: i128 = 0;
                for _ in 0..batch {
                    let mut walk: i128 = 0;
                    for _ in 0..m {
                        let block = draw_block(&mut rng, total_rank, &cumulative_ranks);
                        walk += values[block] as i128;
                    }
                    if walk >= threshold_small {
                        tail_hits += 1;
                    }
                    chunk_sum += walk;
                }
                grand_sum += BigInt::from(chunk_sum);
            }
            None => {
                for _ in 0..batch {
                    let mut walk = BigInt::from(0);
                    for _ in 0..m {
                        let block = draw_block(&mut rng, total_rank, &cumulative_ranks);
                        walk += &scaled.values[block];
                    }
                    if walk >= threshold {
                        tail_hits += 1;
                    }
                    grand_sum += walk;
                }
            }
        }
        remaining -= batch;
        chunk_index += 1;
    }

    let denom = BigInt::from(n_samples) * BigInt::from(m) * &scaled.scale;
    let empirical_mean = Rational::new(grand_sum, denom)
        .to_f64()
        .expect("empirical mean converts to f64");
    WalkEstimate {
        empirical_tail: tail_hits as f64 / n_samples as f64,
        empirical_mean,
    }
}

/// Index of the block whose cumulative rank interval contains a uniform
/// draw from `[0, total)`.
fn draw_block(rng: &mut ChaCha12Rng, total: u64, cumulative: &[u64]) -> usize {
    let x = uniform_below(rng, total);
    cumulative.partition_point(|&c| c <= x)
}

/// Unbiased uniform integer in `[0, n)` (Lemire's multiply-shift with
/// rejection).
fn uniform_below(rng: &mut ChaCha12Rng, n: u64) -> u64 {
    debug_assert!(n > 0);
    let mut product = rng.next_u64() as u128 * n as u128;
    if (product as u64) < n {
        let cutoff = n.wrapping_neg() % n;
        while (product as u64) < cutoff {
            product = rng.next_u64() as u128 * n as u128;
        }
    }
    (product >> 64) as u64
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn chunk_seed(seed: u64, chunk: u64) -> u64 {
    splitmix64(splitmix64(seed) ^ chunk.wrapping_mul(0xD1B5_4A32_D192_ED03))
}
