//! Harder–Narasimhan data and the structures it is extracted from.
//!
//! HN data is a strictly decreasing vector of rational slopes
//! `μ_1 > … > μ_ℓ` paired with positive integer ranks `r_1, …, r_ℓ`. From it
//! every other quantity in this crate is derived: the degree vector
//! `d_i = r_i μ_i`, the probability vector `p_i = r_i / r`, and the mean and
//! variance of the slope random variable that drives the walk in
//! [`crate::prob`].
//!
//! Two concrete sources are modeled. A [`FilteredVectorSpace`] (a single
//! strictly decreasing filtration with rational jump values) yields HN data
//! whose slopes are the jump values in decreasing order and whose ranks are
//! the graded dimensions. A [`SplitP1Bundle`] (a direct sum of line-bundle
//! powers on the projective line) yields HN data whose slopes are the
//! summand degrees, reindexed decreasingly.

use alloc::vec::Vec;

use num_traits::Zero;
use thiserror::Error;

use crate::rational::Rational;

/// Validation failures for HN data and its source structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DataError {
    #[error("data must contain at least one block")]
    EmptyData,
    #[error("vector lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("rank at position {index} must be positive")]
    NonPositiveRank { index: usize },
    #[error("slopes must be strictly decreasing (violated at position {index})")]
    SlopesNotStrictlyDecreasing { index: usize },
    #[error("total rank overflows a 64-bit integer")]
    RankOverflow,
    #[error("jump values must be strictly increasing (violated at position {index})")]
    JumpsNotStrictlyIncreasing { index: usize },
    #[error("filtration step dimension at position {index} must be positive")]
    NonPositiveDimension { index: usize },
    #[error("filtration step dimensions must be strictly decreasing (violated at position {index})")]
    StepDimsNotStrictlyDecreasing { index: usize },
    #[error("bundle degrees must be strictly increasing (violated at position {index})")]
    DegreesNotStrictlyIncreasing { index: usize },
    #[error("multiplicity at position {index} must be positive")]
    NonPositiveMultiplicity { index: usize },
}

/// Harder–Narasimhan data: strictly decreasing rational slopes with
/// positive integer ranks.
///
/// Construction validates; the fields are immutable afterwards, so a value
/// of this type always satisfies the invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HNData {
    slopes: Vec<Rational>,
    ranks: Vec<u64>,
}

impl HNData {
    /// Validates and builds HN data.
    pub fn new(slopes: Vec<Rational>, ranks: Vec<u64>) -> Result<Self, DataError> {
        if slopes.is_empty() || ranks.is_empty() {
            return Err(DataError::EmptyData);
        }
        if slopes.len() != ranks.len() {
            return Err(DataError::LengthMismatch {
                left: slopes.len(),
                right: ranks.len(),
            });
        }
        if let Some(index) = ranks.iter().position(|&r| r == 0) {
            return Err(DataError::NonPositiveRank { index });
        }
        for index in 1..slopes.len() {
            if slopes[index - 1] <= slopes[index] {
                return Err(DataError::SlopesNotStrictlyDecreasing { index });
            }
        }
        let mut total: u64 = 0;
        for &r in &ranks {
            total = total.checked_add(r).ok_or(DataError::RankOverflow)?;
        }
        Ok(HNData { slopes, ranks })
    }

    /// Like [`HNData::new`] but merges adjacent blocks with equal slopes,
    /// summing their ranks. Input slopes must be non-increasing.
    ///
    /// Strict validation is the default; this helper is for callers that
    /// assemble blocks from sources where repeated slopes are legitimate.
    pub fn merged(slopes: Vec<Rational>, ranks: Vec<u64>) -> Result<Self, DataError> {
        if slopes.len() != ranks.len() {
            return Err(DataError::LengthMismatch {
                left: slopes.len(),
                right: ranks.len(),
            });
        }
        let mut merged_slopes: Vec<Rational> = Vec::new();
        let mut merged_ranks: Vec<u64> = Vec::new();
        for (index, (slope, &rank)) in slopes.iter().zip(&ranks).enumerate() {
            if rank == 0 {
                return Err(DataError::NonPositiveRank { index });
            }
            match merged_slopes.last() {
                Some(last) if last == slope => {
                    let acc = merged_ranks.last_mut().expect("ranks track slopes");
                    *acc = acc.checked_add(rank).ok_or(DataError::RankOverflow)?;
                }
                _ => {
                    merged_slopes.push(slope.clone());
                    merged_ranks.push(rank);
                }
            }
        }
        Self::new(merged_slopes, merged_ranks)
    }

    /// Number of blocks `ℓ`.
    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn slopes(&self) -> &[Rational] {
        &self.slopes
    }

    pub fn ranks(&self) -> &[u64] {
        &self.ranks
    }

    /// Total rank `r = Σ r_i`. Fits `u64` by construction.
    pub fn total_rank(&self) -> u64 {
        self.ranks.iter().sum()
    }

    /// Computes every derived quantity exactly.
    pub fn derive(&self) -> HNDerived {
        let total_rank = self.total_rank();
        let rank_rat = Rational::from_integer(total_rank.into());
        let degrees: Vec<Rational> = self
            .slopes
            .iter()
            .zip(&self.ranks)
            .map(|(slope, &rank)| slope * Rational::from_integer(rank.into()))
            .collect();
        let total_degree: Rational = degrees.iter().sum();
        let probabilities: Vec<Rational> = self
            .ranks
            .iter()
            .map(|&rank| Rational::from_integer(rank.into()) / &rank_rat)
            .collect();
        let mean: Rational = self
            .slopes
            .iter()
            .zip(&probabilities)
            .map(|(slope, p)| slope * p)
            .sum();
        let second_moment: Rational = self
            .slopes
            .iter()
            .zip(&probabilities)
            .map(|(slope, p)| slope * slope * p)
            .sum();
        let variance = second_moment - &mean * &mean;
        HNDerived {
            degrees,
            total_rank,
            total_degree,
            probabilities,
            mean,
            variance,
        }
    }
}

/// Quantities derived from HN data: degrees, total rank and degree, the
/// probability vector, and the mean/variance of the slope variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HNDerived {
    /// `d_i = r_i μ_i`.
    pub degrees: Vec<Rational>,
    /// `r = Σ r_i`.
    pub total_rank: u64,
    /// `|d| = Σ d_i`.
    pub total_degree: Rational,
    /// `p_i = r_i / r`; sums to one exactly.
    pub probabilities: Vec<Rational>,
    /// `μ = Σ μ_i p_i = |d| / r`.
    pub mean: Rational,
    /// `σ² = Σ μ_i² p_i − μ²`; zero iff there is a single block.
    pub variance: Rational,
}

impl HNDerived {
    /// True iff the total degree is strictly positive — the hypothesis under
    /// which the walk's tail probability converges to one.
    pub fn is_positive_degree(&self) -> bool {
        self.total_degree > Rational::zero()
    }
}

/// A finite-dimensional vector space with a single decreasing filtration:
/// strictly increasing rational jump values `λ_0 < … < λ_n` and the
/// dimensions of the corresponding steps, `step_dims[j] = dim F^{λ_j} V`.
///
/// Steps are strict, so the dimensions are strictly decreasing and
/// `step_dims[0]` is the dimension of the whole space. Negative jump values
/// are accepted; [`FilteredVectorSpace::has_negative_jump`] lets callers
/// surface a warning where the usual normalization `λ_0 ≥ 0` matters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredVectorSpace {
    jumps: Vec<Rational>,
    step_dims: Vec<u64>,
}

impl FilteredVectorSpace {
    pub fn new(jumps: Vec<Rational>, step_dims: Vec<u64>) -> Result<Self, DataError> {
        if jumps.is_empty() || step_dims.is_empty() {
            return Err(DataError::EmptyData);
        }
        if jumps.len() != step_dims.len() {
            return Err(DataError::LengthMismatch {
                left: jumps.len(),
                right: step_dims.len(),
            });
        }
        if let Some(index) = step_dims.iter().position(|&d| d == 0) {
            return Err(DataError::NonPositiveDimension { index });
        }
        for index in 1..jumps.len() {
            if jumps[index - 1] >= jumps[index] {
                return Err(DataError::JumpsNotStrictlyIncreasing { index });
            }
        }
        for index in 1..step_dims.len() {
            if step_dims[index - 1] <= step_dims[index] {
                return Err(DataError::StepDimsNotStrictlyDecreasing { index });
            }
        }
        Ok(FilteredVectorSpace { jumps, step_dims })
    }

    pub fn jumps(&self) -> &[Rational] {
        &self.jumps
    }

    pub fn step_dims(&self) -> &[u64] {
        &self.step_dims
    }

    /// Dimension of the underlying space.
    pub fn dim(&self) -> u64 {
        self.step_dims[0]
    }

    /// True iff the lowest jump value is negative.
    pub fn has_negative_jump(&self) -> bool {
        self.jumps[0] < Rational::zero()
    }

    /// Extracts the HN data of the canonical filtration.
    ///
    /// The canonical flag of a singly-filtered space is the chain of
    /// filtration steps themselves, read from the top: the `i`th subquotient
    /// is the graded piece at jump `λ_{n+1-i}`, which is semistable with
    /// slope equal to its jump value. Hence the slopes are the jumps in
    /// decreasing order and the ranks are the dimension increments.
    pub fn hn_data(&self) -> HNData {
        let n = self.jumps.len();
        let mut slopes = Vec::with_capacity(n);
        let mut ranks = Vec::with_capacity(n);
        for i in (0..n).rev() {
            let below = if i + 1 < n { self.step_dims[i + 1] } else { 0 };
            slopes.push(self.jumps[i].clone());
            ranks.push(self.step_dims[i] - below);
        }
        HNData { slopes, ranks }
    }
}

/// A direct sum of line-bundle powers on the projective line, recorded as
/// strictly increasing integer degrees with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitP1Bundle {
    degrees: Vec<i64>,
    multiplicities: Vec<u64>,
}

impl SplitP1Bundle {
    pub fn new(degrees: Vec<i64>, multiplicities: Vec<u64>) -> Result<Self, DataError> {
        if degrees.is_empty() || multiplicities.is_empty() {
            return Err(DataError::EmptyData);
        }
        if degrees.len() != multiplicities.len() {
            return Err(DataError::LengthMismatch {
                left: degrees.len(),
                right: multiplicities.len(),
            });
        }
        if let Some(index) = multiplicities.iter().position(|&m| m == 0) {
            return Err(DataError::NonPositiveMultiplicity { index });
        }
        for index in 1..degrees.len() {
            if degrees[index - 1] >= degrees[index] {
                return Err(DataError::DegreesNotStrictlyIncreasing { index });
            }
        }
        let mut total: u64 = 0;
        for &m in &multiplicities {
            total = total.checked_add(m).ok_or(DataError::RankOverflow)?;
        }
        Ok(SplitP1Bundle {
            degrees,
            multiplicities,
        })
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn multiplicities(&self) -> &[u64] {
        &self.multiplicities
    }

    /// Extracts HN data: the subquotient slope of the `i`th block is its
    /// summand degree `b_i`. Degrees are stored increasingly, so the blocks
    /// are reindexed in decreasing order here.
    pub fn hn_data(&self) -> HNData {
        let slopes = self
            .degrees
            .iter()
            .rev()
            .map(|&b| Rational::from_integer(b.into()))
            .collect();
        let ranks = self.multiplicities.iter().rev().copied().collect();
        HNData { slopes, ranks }
    }
}
