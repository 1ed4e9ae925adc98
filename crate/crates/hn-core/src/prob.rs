//! Exact and approximate tail probabilities of the slope random walk.
//!
//! Given HN data, the slope random variable `Y` takes value `μ_i` with
//! probability `p_i = r_i / r`. The `m`-step walk `Z_m = Y_1 + … + Y_m` has
//! a finite support contained in an arithmetic progression: multiplying by
//! `scale` (the lcm of the slope denominators) turns every attainable sum
//! into an integer. [`distribution`] computes the full law of `Z_m` exactly
//! as big-integer weighted counts over that grid — the count at scaled sum
//! `s` is the number of index tuples hitting `s`, each weighted by the
//! product of its ranks — with the single division by `r^m` deferred until
//! a probability is requested.
//!
//! On top of the exact law sit the comparisons: [`clt_tail`] evaluates the
//! normal approximation `1 − Φ((z − mμ)/(σ√m))`, [`chebyshev_tail_bound`]
//! the one-sided Chebyshev lower bound, and [`sample_walk`] a reproducible
//! Monte Carlo estimate.

mod dp;
mod normal;
mod ntt;
mod sample;

pub use normal::normal_cdf;
pub use sample::{sample_walk, WalkEstimate};

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::data::HNData;
use crate::rational::Rational;

/// Default cap on the number of grid cells `(μ_1−μ_ℓ)·scale·m + 1`.
pub const DEFAULT_GRID_BOUND: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error("slope-sum grid needs {required} cells, exceeding the bound of {bound}")]
    ScaledRangeOverflow { required: u128, bound: u64 },
    #[error("slope distribution has zero variance; the normal approximation is undefined")]
    ZeroVariance,
    #[error("Chebyshev lower bound applies only below the mean (z < m*mean)")]
    BoundNotApplicable,
}

/// Which exact convolution backend to use.
///
/// Both backends produce identical counts; `Auto` switches to the modular
/// transform when the direct pass over the grid would be slower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    Auto,
    /// Step-by-step convolution with big-integer cells.
    Direct,
    /// Number-theoretic transforms modulo word-size primes, recombined by
    /// the Chinese remainder theorem. Exact: the prime product exceeds the
    /// largest possible count.
    Modular,
}

#[derive(Debug, Clone)]
pub struct ProbConfig {
    /// Maximum number of grid cells before [`ProbError::ScaledRangeOverflow`].
    pub grid_bound: u64,
    pub backend: Backend,
}

impl Default for ProbConfig {
    fn default() -> Self {
        ProbConfig {
            grid_bound: DEFAULT_GRID_BOUND,
            backend: Backend::Auto,
        }
    }
}

/// Slopes on the common integer grid: `values[i] = μ_i * scale` with
/// `scale` the lcm of the slope denominators. Values inherit the strictly
/// decreasing order of the slopes.
pub(crate) struct ScaledSlopes {
    pub scale: BigInt,
    pub values: Vec<BigInt>,
}

pub(crate) fn scaled_slopes(data: &HNData) -> ScaledSlopes {
    let mut scale = BigInt::one();
    for slope in data.slopes() {
        scale = scale.lcm(slope.denom());
    }
    let values = data
        .slopes()
        .iter()
        .map(|slope| slope.numer() * (&scale / slope.denom()))
        .collect();
    ScaledSlopes { scale, values }
}

/// The exact law of `Z_m` as weighted counts over the scaled integer grid.
///
/// `weighted_counts[k]` is the total rank-product weight of index tuples
/// whose scaled slope sum equals `offset + k`; dividing by `denominator`
/// (`r^m`) gives the probability. The counts always sum to `denominator`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeSumDistribution {
    m: u32,
    scale: BigUint,
    offset: BigInt,
    weighted_counts: Vec<BigUint>,
    denominator: BigUint,
}

impl SlopeSumDistribution {
    pub fn m(&self) -> u32 {
        self.m
    }

    /// lcm of the slope denominators.
    pub fn scale(&self) -> &BigUint {
        &self.scale
    }

    /// Scaled sum of the all-minimal tuple, `m · μ_ℓ · scale`.
    pub fn offset(&self) -> &BigInt {
        &self.offset
    }

    pub fn weighted_counts(&self) -> &[BigUint] {
        &self.weighted_counts
    }

    /// `r^m`, the total weight.
    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// Smallest attainable value `m·μ_ℓ`.
    pub fn support_min(&self) -> Rational {
        Rational::new(self.offset.clone(), self.scale_int())
    }

    /// Largest attainable value `m·μ_1`.
    pub fn support_max(&self) -> Rational {
        let top = &self.offset + BigInt::from(self.weighted_counts.len() - 1);
        Rational::new(top, self.scale_int())
    }

    fn scale_int(&self) -> BigInt {
        BigInt::from(self.scale.clone())
    }

    /// Point masses `(value, probability)` in increasing value order,
    /// skipping zero-probability grid cells.
    pub fn point_masses(&self) -> Vec<(Rational, Rational)> {
        let denom = BigInt::from(self.denominator.clone());
        self.weighted_counts
            .iter()
            .enumerate()
            .filter(|(_, count)| !count.is_zero())
            .map(|(k, count)| {
                let value = Rational::new(&self.offset + BigInt::from(k), self.scale_int());
                let prob = Rational::new(BigInt::from(count.clone()), denom.clone());
                (value, prob)
            })
            .collect()
    }

    /// Numerator of the tail probability at threshold `z`: the summed weight
    /// of tuples with slope sum `≥ z`.
    ///
    /// The threshold is closed. On the integer grid `s ≥ z·scale` is
    /// equivalent to `s ≥ ceil(z·scale)`.
    pub fn tail_count(&self, z: &Rational) -> BigUint {
        let scaled = z * Rational::from_integer(self.scale_int());
        let threshold = scaled.ceil().to_integer();
        let start = &threshold - &self.offset;
        let start = if start.is_negative() {
            0usize
        } else {
            match start.to_usize() {
                Some(k) => k,
                None => return BigUint::zero(),
            }
        };
        if start >= self.weighted_counts.len() {
            return BigUint::zero();
        }
        self.weighted_counts[start..].iter().sum()
    }

    /// Exact tail probability `Prob(Z_m ≥ z)`.
    pub fn exact_tail(&self, z: &Rational) -> Rational {
        Rational::new(
            BigInt::from(self.tail_count(z)),
            BigInt::from(self.denominator.clone()),
        )
    }

    /// Total mass as a count; equals [`Self::denominator`] by construction.
    pub fn mass_total(&self) -> BigUint {
        self.weighted_counts.iter().sum()
    }

    /// Exact mean of `Z_m`; equals `m·μ`.
    pub fn mean(&self) -> Rational {
        let first = self.first_moment_scaled();
        Rational::new(first, self.scale_int() * BigInt::from(self.denominator.clone()))
    }

    /// Exact variance of `Z_m`; equals `m·σ²`.
    pub fn variance(&self) -> Rational {
        let denom = BigInt::from(self.denominator.clone());
        let mut second = BigInt::zero();
        for (k, count) in self.weighted_counts.iter().enumerate() {
            if !count.is_zero() {
                let s = &self.offset + BigInt::from(k);
                second += &s * &s * BigInt::from(count.clone());
            }
        }
        let scale = self.scale_int();
        let ex2 = Rational::new(second, &scale * &scale * &denom);
        let mean = self.mean();
        ex2 - &mean * &mean
    }

    fn first_moment_scaled(&self) -> BigInt {
        let mut first = BigInt::zero();
        for (k, count) in self.weighted_counts.iter().enumerate() {
            if !count.is_zero() {
                let s = &self.offset + BigInt::from(k);
                first += s * BigInt::from(count.clone());
            }
        }
        first
    }
}

/// Computes the exact law of `Z_m` with the default configuration.
pub fn distribution(data: &HNData, m: u32) -> Result<SlopeSumDistribution, ProbError> {
    distribution_with(data, m, &ProbConfig::default())
}

/// Computes the exact law of `Z_m`.
///
/// The counts satisfy the recurrence `N_k(s) = Σ_i r_i · N_{k−1}(s − μ_i·scale)`
/// with `N_0` a point mass at zero; the returned vector is `N_m` re-indexed
/// from the minimal scaled sum.
pub fn distribution_with(
    data: &HNData,
    m: u32,
    config: &ProbConfig,
) -> Result<SlopeSumDistribution, ProbError> {
    assert!(m >= 1, "walk length must be positive");
    let scaled = scaled_slopes(data);
    let lowest = scaled.values.last().expect("data is nonempty");
    let span_big = scaled.values.first().expect("data is nonempty") - lowest;

    let cells_u128 = match span_big.to_u128() {
        Some(span) => span
            .checked_mul(m as u128)
            .and_then(|range| range.checked_add(1)),
        None => None,
    };
    let cells = match cells_u128 {
        Some(cells) if cells <= config.grid_bound as u128 => cells as usize,
        _ => {
            return Err(ProbError::ScaledRangeOverflow {
                required: cells_u128.unwrap_or(u128::MAX),
                bound: config.grid_bound,
            })
        }
    };

    let deltas: Vec<usize> = scaled
        .values
        .iter()
        .map(|v| {
            (v - lowest)
                .to_usize()
                .expect("per-step span fits the grid")
        })
        .collect();
    let weights = data.ranks();
    let total_weight: u64 = weights.iter().sum();
    let denominator = BigUint::from(total_weight).pow(m);

    let use_modular = match config.backend {
        Backend::Direct => false,
        Backend::Modular => true,
        Backend::Auto => ntt::worthwhile(weights.len(), deltas[0], m, total_weight, cells),
    };
    let weighted_counts = if use_modular {
        ntt::convolve_power(weights, &deltas, m, cells, &denominator)
    } else {
        dp::convolve_power(weights, &deltas, m, cells)
    };

    // Exactness guard shared by both backends: the counts of any walk law
    // must exhaust the total weight (Σ w_i)^m.
    let mass: BigUint = weighted_counts.iter().sum();
    assert_eq!(
        mass, denominator,
        "convolution backend lost mass; this is a bug in hn-core"
    );

    Ok(SlopeSumDistribution {
        m,
        scale: scaled
            .scale
            .to_biguint()
            .expect("lcm of positive denominators is positive"),
        offset: lowest * BigInt::from(m),
        weighted_counts,
        denominator,
    })
}

/// Normal approximation of the tail: `1 − Φ((z − mμ)/(σ√m))`.
///
/// Mean and variance are carried as exact rationals and converted to
/// floating point only for the final standardization.
pub fn clt_tail(data: &HNData, m: u32, z: &Rational) -> Result<f64, ProbError> {
    let derived = data.derive();
    if derived.variance.is_zero() {
        return Err(ProbError::ZeroVariance);
    }
    let m_rat = Rational::from_integer(m.into());
    let centered = z - &derived.mean * &m_rat;
    let spread = libm::sqrt(
        (&derived.variance * &m_rat)
            .to_f64()
            .expect("variance converts to f64"),
    );
    let standardized = centered.to_f64().expect("rational converts to f64") / spread;
    Ok(1.0 - normal_cdf(standardized))
}

/// One-sided Chebyshev lower bound on the tail, exact form.
///
/// For `z < mμ`, `Prob(Z_m ≥ z) ≥ 1 − mσ²/(mμ − z)²`; the bound is clamped
/// to `[0, 1]`. Above the mean the inequality says nothing, hence
/// [`ProbError::BoundNotApplicable`].
pub fn chebyshev_tail_bound_exact(
    data: &HNData,
    m: u32,
    z: &Rational,
) -> Result<Rational, ProbError> {
    let derived = data.derive();
    let m_rat = Rational::from_integer(m.into());
    let walk_mean = &derived.mean * &m_rat;
    if *z >= walk_mean {
        return Err(ProbError::BoundNotApplicable);
    }
    let gap = &walk_mean - z;
    let bound = Rational::one() - &derived.variance * &m_rat / (&gap * &gap);
    Ok(if bound.is_negative() {
        Rational::zero()
    } else {
        bound
    })
}

/// [`chebyshev_tail_bound_exact`] as floating point.
pub fn chebyshev_tail_bound(data: &HNData, m: u32, z: &Rational) -> Result<f64, ProbError> {
    chebyshev_tail_bound_exact(data, m, z)
        .map(|bound| bound.to_f64().expect("bound in [0,1] converts to f64"))
}

/// One row of the exact-versus-approximate tail comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct TailReport {
    pub m: u32,
    pub z: Rational,
    pub exact_tail: Rational,
    /// `None` when the variance vanishes (single block).
    pub clt_approx: Option<f64>,
    /// `None` when `z ≥ mμ`.
    pub chebyshev_bound: Option<f64>,
    pub abs_error_clt: Option<f64>,
}

/// Tabulates exact and approximate tails for each requested walk length.
pub fn tail_table(data: &HNData, z: &Rational, ms: &[u32]) -> Result<Vec<TailReport>, ProbError> {
    tail_table_with(data, z, ms, &ProbConfig::default())
}

pub fn tail_table_with(
    data: &HNData,
    z: &Rational,
    ms: &[u32],
    config: &ProbConfig,
) -> Result<Vec<TailReport>, ProbError> {
    ms.iter()
        .map(|&m| {
            let dist = distribution_with(data, m, config)?;
            let exact_tail = dist.exact_tail(z);
            let clt_approx = clt_tail(data, m, z).ok();
            let chebyshev_bound = chebyshev_tail_bound(data, m, z).ok();
            let abs_error_clt = clt_approx.map(|clt| {
                libm::fabs(exact_tail.to_f64().expect("tail in [0,1] converts") - clt)
            });
            Ok(TailReport {
                m,
                z: z.clone(),
                exact_tail,
                clt_approx,
                chebyshev_bound,
                abs_error_clt,
            })
        })
        .collect()
}
