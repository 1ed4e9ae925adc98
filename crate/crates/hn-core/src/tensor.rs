//! Index-tuple combinatorics of the tensor powers of the HN subspaces.
//!
//! For HN data of length `ℓ` and a tensor power `m`, the index set `[ℓ]^m`
//! carries the weight `v(a) = Σ_j μ_{a_j}` (the slope of the corresponding
//! graded piece, whose dimension is `Π_j r_{a_j}`) and the componentwise
//! domination order. The tuples with `v(a) ≥ z` span a subspace of the
//! `m`-th tensor power whose dimension is the rank-product sum over exactly
//! those tuples — the same weighted count the walk distribution tallies, so
//! the dimension ratio against `r^m` coincides with the exact tail
//! probability. [`tensor_report`] packages those quantities; the identity
//! is surfaced (not assumed) so callers can verify it.
//!
//! Cardinalities and dimensions are computed by the shared grid
//! convolution: unit weights count tuples, rank weights accumulate
//! dimensions. Tuples are only materialized by [`ordered_tuples`], which is
//! bounded and intended for inspection at small sizes.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;
use thiserror::Error;

use crate::data::HNData;
use crate::prob::{distribution_with, scaled_slopes, ProbConfig, ProbError};
use crate::rational::Rational;

/// Default cap on `ℓ^m` for explicit tuple enumeration.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TensorError {
    #[error("tuple entry {value} at position {position} is outside 1..={length}")]
    IndexOutOfRange {
        position: usize,
        value: u32,
        length: usize,
    },
    #[error("tuples have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("enumeration needs {required} tuples, exceeding the bound of {bound}")]
    EnumerationBoundExceeded { required: u128, bound: u64 },
}

/// An element of `[ℓ]^m`: 1-based block indices `a_1, …, a_m`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TupleIndex(Vec<u32>);

impl TupleIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        TupleIndex(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_range(&self, data: &HNData) -> Result<(), TensorError> {
        let length = data.len();
        for (position, &value) in self.0.iter().enumerate() {
            if value == 0 || value as usize > length {
                return Err(TensorError::IndexOutOfRange {
                    position,
                    value,
                    length,
                });
            }
        }
        Ok(())
    }
}

/// The weight `v(a) = Σ_j μ_{a_j}`; the empty tuple has weight zero.
pub fn weight(data: &HNData, tuple: &TupleIndex) -> Result<Rational, TensorError> {
    tuple.check_range(data)?;
    let mut total = Rational::zero();
    for &entry in tuple.entries() {
        total += &data.slopes()[entry as usize - 1];
    }
    Ok(total)
}

/// Componentwise domination `a ≽ b`: `a_j ≥ b_j` for every position.
pub fn dominates(a: &TupleIndex, b: &TupleIndex) -> Result<bool, TensorError> {
    if a.len() != b.len() {
        return Err(TensorError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(a.entries().iter().zip(b.entries()).all(|(x, y)| x >= y))
}

/// True iff `v(a) ≥ z` (closed threshold), i.e. the tuple qualifies for the
/// threshold-`z` subspace.
pub fn membership(data: &HNData, z: &Rational, tuple: &TupleIndex) -> Result<bool, TensorError> {
    Ok(weight(data, tuple)? >= *z)
}

/// Cardinality of the qualifying set: the number of tuples in `[ℓ]^m` with
/// weight at least `z`. Computed by the grid convolution with unit weights.
pub fn count_qualifying(data: &HNData, m: u32, z: &Rational) -> Result<BigUint, ProbError> {
    count_qualifying_with(data, m, z, &ProbConfig::default())
}

pub fn count_qualifying_with(
    data: &HNData,
    m: u32,
    z: &Rational,
    config: &ProbConfig,
) -> Result<BigUint, ProbError> {
    let unit = HNData::new(data.slopes().to_vec(), vec![1; data.len()])
        .expect("slopes already validated");
    Ok(distribution_with(&unit, m, config)?.tail_count(z))
}

/// Dimension of the subspace spanned by the qualifying tensor products:
/// `Σ_{v(a) ≥ z} Π_j r_{a_j}`, the tail numerator of the walk distribution.
pub fn qualifying_dimension(data: &HNData, m: u32, z: &Rational) -> Result<BigUint, ProbError> {
    qualifying_dimension_with(data, m, z, &ProbConfig::default())
}

pub fn qualifying_dimension_with(
    data: &HNData,
    m: u32,
    z: &Rational,
    config: &ProbConfig,
) -> Result<BigUint, ProbError> {
    Ok(distribution_with(data, m, config)?.tail_count(z))
}

/// Tensor-power dimension count at threshold `z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorReport {
    pub m: u32,
    pub z: Rational,
    /// Number of qualifying tuples, `#S`.
    pub tuple_count: BigUint,
    /// Dimension of the span of qualifying tensor products.
    pub subspace_dim: BigUint,
    /// `r^m`, the dimension of the full tensor power.
    pub total_dim: BigUint,
    /// `subspace_dim / total_dim`; equals the exact tail probability.
    pub ratio: Rational,
}

/// Computes all tensor-power quantities for `(m, z)` with defaults.
pub fn tensor_report(data: &HNData, m: u32, z: &Rational) -> Result<TensorReport, ProbError> {
    tensor_report_with(data, m, z, &ProbConfig::default())
}

pub fn tensor_report_with(
    data: &HNData,
    m: u32,
    z: &Rational,
    config: &ProbConfig,
) -> Result<TensorReport, ProbError> {
    let dist = distribution_with(data, m, config)?;
    let tuple_count = count_qualifying_with(data, m, z, config)?;
    let subspace_dim = dist.tail_count(z);
    let total_dim = dist.denominator().clone();
    let ratio = Rational::new(
        BigInt::from(subspace_dim.clone()),
        BigInt::from(total_dim.clone()),
    );
    Ok(TensorReport {
        m,
        z: z.clone(),
        tuple_count,
        subspace_dim,
        total_dim,
        ratio,
    })
}

/// All of `[ℓ]^m` sorted by weight descending, ties broken lexicographically
/// ascending. Any prefix cut at a realized weight is a qualifying set.
///
/// Materializes `ℓ^m` tuples; errors beyond [`DEFAULT_ENUMERATION_BOUND`].
pub fn ordered_tuples(data: &HNData, m: u32) -> Result<Vec<TupleIndex>, TensorError> {
    ordered_tuples_bounded(data, m, DEFAULT_ENUMERATION_BOUND)
}

pub fn ordered_tuples_bounded(
    data: &HNData,
    m: u32,
    bound: u64,
) -> Result<Vec<TupleIndex>, TensorError> {
    let length = data.len() as u128;
    let required = length.checked_pow(m).unwrap_or(u128::MAX);
    if required > bound as u128 {
        return Err(TensorError::EnumerationBoundExceeded { required, bound });
    }
    let scaled = scaled_slopes(data);
    let mut entries: Vec<(BigInt, TupleIndex)> = all_tuples(data.len() as u32, m)
        .map(|tuple| {
            let w: BigInt = tuple
                .entries()
                .iter()
                .map(|&e| scaled.values[e as usize - 1].clone())
                .sum();
            (w, tuple)
        })
        .collect();
    entries.sort_by(|(wa, a), (wb, b)| wb.cmp(wa).then_with(|| a.cmp(b)));
    Ok(entries.into_iter().map(|(_, tuple)| tuple).collect())
}

/// Streams `[ℓ]^m` in lexicographic order without materializing it.
pub fn all_tuples(length: u32, m: u32) -> impl Iterator<Item = TupleIndex> {
    let mut state: Option<Vec<u32>> = Some(vec![1; m as usize]);
    core::iter::from_fn(move || {
        let current = state.take()?;
        let emitted = TupleIndex::new(current.clone());
        let mut next = current;
        for slot in next.iter_mut().rev() {
            if *slot < length {
                *slot += 1;
                state = Some(next);
                return Some(emitted);
            }
            *slot = 1;
        }
        // exhausted; state stays None
        Some(emitted)
    })
}
