//! Direct convolution powers with big-integer cells.
//!
//! Reference backend: unmistakably the defining recurrence, used for small
//! and medium grids and as the ground truth the modular backend is checked
//! against.

use alloc::vec;
use alloc::vec::Vec;

use core::mem;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Coefficients of `(Σ_i w_i x^{δ_i})^m`, dense over `0..cells`.
///
/// `cells` must equal `max(δ)·m + 1`.
pub(crate) fn convolve_power(
    weights: &[u64],
    deltas: &[usize],
    m: u32,
    cells: usize,
) -> Vec<BigUint> {
    let span = deltas.iter().copied().max().unwrap_or(0);
    debug_assert_eq!(span * m as usize + 1, cells);
    let mut current = vec![BigUint::zero(); cells];
    let mut next = vec![BigUint::zero(); cells];
    current[0] = BigUint::one();
    for step in 1..=m as usize {
        let prev_hi = span * (step - 1);
        for s in 0..=span * step {
            let mut acc = BigUint::zero();
            for (&w, &d) in weights.iter().zip(deltas) {
                if s >= d && s - d <= prev_hi {
                    let cell = &current[s - d];
                    if !cell.is_zero() {
                        if w == 1 {
                            acc += cell;
                        } else {
                            acc += cell * w;
                        }
                    }
                }
            }
            next[s] = acc;
        }
        mem::swap(&mut current, &mut next);
    }
    current
}
