//! Exact arithmetic for Harder–Narasimhan data and its asymptotic statistics.
//!
//! The crate models Harder–Narasimhan (HN) data — a strictly decreasing
//! vector of rational slopes paired with positive integer ranks — together
//! with the structures it is extracted from (filtered vector spaces, split
//! bundles on the projective line) and the quantities derived from it:
//!
//! * [`data`]: HN data, validation, derived degree/probability vectors,
//!   mean and variance of the slope random variable.
//! * [`polygon`]: the concave rank/degree polygon and its vertex set, with
//!   CSV and SVG renderings.
//! * [`prob`]: the exact distribution of the `m`-step slope random walk as
//!   big-integer weighted counts, exact tail probabilities, and their
//!   central-limit and Chebyshev approximations, plus reproducible Monte
//!   Carlo sampling.
//! * [`tensor`]: the weight order on index tuples and the tensor-power
//!   subspace dimension counts whose ratio reproduces the exact tail.
//!
//! All core computations are exact: rationals are arbitrary-precision and
//! always canonical, walk distributions are integer weighted counts over a
//! common denominator `r^m`. Floating point only enters in the explicitly
//! approximate quantities (normal CDF, Chebyshev bound, SVG layout).
//!
//! The crate is `no_std`-compatible (`default-features = false`); it only
//! requires `alloc`.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod data;
pub mod polygon;
pub mod prob;
pub mod rational;
pub mod tensor;

pub use data::{DataError, FilteredVectorSpace, HNData, HNDerived, SplitP1Bundle};
pub use polygon::HNPolygon;
pub use rational::Rational;

// Big-integer types that appear in the public API.
pub use num_bigint::{BigInt, BigUint};
