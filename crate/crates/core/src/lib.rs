//! Hamiltonian paths with pairwise-distinct absolute differences.
//!
//! * [`sequence`]: permutations of `[n]`, good-sequence classification,
//!   arithmetic progressions and the basic path checks.
//! * [`construct`]: the constructive recursion giving, for every `n` and
//!   start `s`, a permutation of `[n]` from `s` with distinct differences.
//! * [`oracle`]: exhaustive searches used as ground truth.
//! * [`stats`]: difference counts, additive energy, the inclusion-exclusion
//!   bound on distinct cyclic differences, and Monte Carlo estimation.
//!
//! Set-level code is generic over [`Scalar`], implemented for the exact
//! integer and rational types; the aliases below fix the common choices.

pub mod construct;
pub mod oracle;
pub mod scalar;
pub mod sequence;
pub mod stats;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serializer;

pub use construct::{
    construct_good, construct_path, exceptional_start, is_exceptional, reflect,
    shift_type1_to_type2, shift_type2_to_type1, zigzag, ConstructError, ConstructionTrace, Rule,
    Step,
};
pub use oracle::{SearchBudget, SearchError};
pub use scalar::Scalar;
pub use sequence::{
    abs_diffs, ap_map, classify_good, is_graceful_cycle, is_graceful_path,
    verify_conjecture_instance, verify_cycle_instance, ApSpec, GoodClass, GoodType, Permutation,
    SequenceError, Verdict,
};
pub use stats::{BoundReport, DiffStats, StatsError, TrialReport};

/// Arbitrary-precision exact rational.
pub type Rational = BigRational;
/// Set of exact rationals, the general input type.
pub type RationalSet = sequence::RealSet<Rational>;
/// Set of machine integers; the fast path for large integer inputs.
pub type IntSet = sequence::RealSet<i64>;
pub type RationalProgression = ApSpec<Rational>;

pub use sequence::RealSet;

/// Nearest `f64`, for display only.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Serializes a rational as `"p/q"`, or `"p"` when integral.
pub fn serialize_rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(q)
}
