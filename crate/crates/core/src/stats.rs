//! Difference statistics, additive energy, the inclusion-exclusion lower
//! bound on the expected number of distinct cyclic differences, and a seeded
//! Monte Carlo estimator of the same expectation.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{ratio, Scalar};
use crate::sequence::RealSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("need a set of at least {need} elements, got {got}")]
    TooSmall { need: usize, got: usize },
    #[error("trial count must be positive")]
    NoTrials,
}

fn require(set_len: usize, need: usize) -> Result<(), StatsError> {
    if set_len < need {
        Err(StatsError::TooSmall { need, got: set_len })
    } else {
        Ok(())
    }
}

/// Counts attached to the positive differences of a set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffStats<T> {
    pub n: usize,
    /// `(A - A)+`.
    pub positive_diffs: BTreeSet<T>,
    /// `r(d)`: ordered pairs `(a, a')` with `a - a' = d`.
    pub r: BTreeMap<T, u64>,
    /// `s(d)`: elements `a` with `a - d` and `a + d` both in the set.
    /// Only differences with a nonzero count are stored.
    pub s3: BTreeMap<T, u64>,
}

impl<T: Scalar> DiffStats<T> {
    pub fn r_of(&self, d: &T) -> u64 {
        self.r.get(d).copied().unwrap_or(0)
    }

    pub fn s3_of(&self, d: &T) -> u64 {
        self.s3.get(d).copied().unwrap_or(0)
    }

    pub fn sum_r(&self) -> u64 {
        self.r.values().sum()
    }

    pub fn sum_s3(&self) -> u64 {
        self.s3.values().sum()
    }

    pub fn sum_r_squared(&self) -> u128 {
        self.r.values().map(|&r| u128::from(r) * u128::from(r)).sum()
    }

    /// `sum r(d)(r(d) - 1)`, the number of ordered pairs of distinct pairs
    /// sharing a difference.
    pub fn sum_r_pairs(&self) -> u128 {
        self.r.values().map(|&r| u128::from(r) * u128::from(r - 1)).sum()
    }

    pub fn is_sidon(&self) -> bool {
        self.r.values().all(|&r| r == 1)
    }
}

fn count_three_term_centres<T: Scalar>(set: &RealSet<T>) -> BTreeMap<T, u64> {
    let e = set.elements();
    let mut s3 = BTreeMap::new();
    for (i, a) in e.iter().enumerate() {
        for b in &e[i + 1..] {
            // a < b < b + d is a progression centred at b
            let d = b.clone() - a.clone();
            if set.contains(&(b.clone() + d.clone())) {
                *s3.entry(d).or_insert(0) += 1;
            }
        }
    }
    s3
}

pub fn diff_stats<T: Scalar>(set: &RealSet<T>) -> Result<DiffStats<T>, StatsError> {
    require(set.len(), 2)?;
    let e = set.elements();
    let mut r: BTreeMap<T, u64> = BTreeMap::new();
    for (i, a) in e.iter().enumerate() {
        for b in &e[i + 1..] {
            *r.entry(b.clone() - a.clone()).or_insert(0) += 1;
        }
    }
    Ok(DiffStats {
        n: set.len(),
        positive_diffs: r.keys().cloned().collect(),
        s3: count_three_term_centres(set),
        r,
    })
}

/// `E(A, A)`: quadruples `(a, b, c, d)` in `A^4` with `a + b = c + d`,
/// counted through the representation numbers of the sumset.
pub fn additive_energy<T: Scalar>(set: &RealSet<T>) -> u128 {
    let e = set.elements();
    let mut reps: HashMap<T, u64> = HashMap::with_capacity(e.len() * e.len() / 2);
    for (i, a) in e.iter().enumerate() {
        *reps.entry(a.clone() + a.clone()).or_insert(0) += 1;
        for b in &e[i + 1..] {
            *reps.entry(a.clone() + b.clone()).or_insert(0) += 2;
        }
    }
    reps.values().map(|&k| u128::from(k) * u128::from(k)).sum()
}

/// Checks `sum s(d) <= n^2 / 4`; the flag is always expected to be true.
pub fn check_sum_s_lemma<T: Scalar>(set: &RealSet<T>) -> (u64, BigRational, bool) {
    let lhs: u64 = count_three_term_centres(set).values().sum();
    let n = set.len() as u64;
    let rhs = ratio(n * n, 4);
    let ok = ratio(lhs, 1) <= rhs;
    (lhs, rhs, ok)
}

/// Terms of the lower bound
/// `E|d(a)| >= 2 sum r / (n-1) - 2 sum s / ((n-1)(n-2)) - 2 sum r(r-1) / (n(n-3))`
/// and of its energy form, where `sum s` is replaced by `n^2/4` and
/// `sum r(r-1)` by `(E - 2n^2 + n) / 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub energy: u128,
    /// Always equal to `n`.
    pub term_main: BigRational,
    pub term_ap: BigRational,
    pub term_energy: BigRational,
    /// `term_ap` with `sum s(d)` replaced by `n^2/4`.
    pub term_ap_lemma: BigRational,
    /// `(E - 2n^2 + n) / (n(n-3))`; equals `term_energy` exactly.
    pub term_energy_form: BigRational,
    pub bound_exact: BigRational,
    pub bound_energy_form: BigRational,
    /// `E / n^2`.
    pub c: BigRational,
}

impl BoundReport {
    /// `bound_exact > n - 1`: a random circular permutation then has more
    /// than `n - 1` distinct differences on average, so some cycle has all `n`.
    pub fn certifies_cycle(&self) -> bool {
        self.bound_exact > ratio(self.n as u64 - 1, 1)
    }

    pub fn energy_form_exceeds(&self) -> bool {
        self.bound_energy_form > ratio(self.n as u64 - 1, 1)
    }
}

/// The per-difference lower bound on `P(d in d(a))` from truncating
/// inclusion-exclusion after the pair terms:
/// `n P(X_i) - n P(X_i, X_{i+1}) - n(n-3)/2 P(X_i, X_j)`.
pub fn difference_lower_bound(n: usize, r: u64, s: u64) -> BigRational {
    let n = n as u64;
    let single = ratio(2 * r, n - 1);
    let adjacent = ratio(2 * s, (n - 1) * (n - 2));
    let apart = ratio(2 * r * (r - 1), n * (n - 3));
    single - adjacent - apart
}

pub fn expectation_bound<T: Scalar>(set: &RealSet<T>) -> Result<BoundReport, StatsError> {
    require(set.len(), 4)?;
    let st = diff_stats(set)?;
    let n = st.n as u64;
    let energy = additive_energy(set);

    let term_main = ratio(2 * st.sum_r(), n - 1);
    let term_ap = ratio(2 * st.sum_s3(), (n - 1) * (n - 2));
    let term_energy = ratio(2 * st.sum_r_pairs(), n * (n - 3));
    let bound_exact: BigRational = st
        .positive_diffs
        .iter()
        .map(|d| difference_lower_bound(st.n, st.r_of(d), st.s3_of(d)))
        .sum();

    let n_sq = u128::from(n * n);
    let term_ap_lemma = ratio(n_sq, 2 * (n - 1) * (n - 2));
    let energy_excess = energy + u128::from(n) - 2 * n_sq;
    let term_energy_form = ratio(energy_excess, n * (n - 3));
    let bound_energy_form = ratio(n, 1) - &term_ap_lemma - &term_energy_form;

    Ok(BoundReport {
        n: st.n,
        energy,
        term_main,
        term_ap,
        term_energy,
        term_ap_lemma,
        term_energy_form,
        bound_exact,
        bound_energy_form,
        c: ratio(energy, n_sq),
    })
}

/// Summary of a seeded Monte Carlo run of `|d(a)|` over random cycles.
///
/// The generator is SplitMix64 seeded with `seed` as its initial state. A
/// trial shuffles the sorted elements by Fisher-Yates from the back: for
/// `i = n-1, ..., 1` it swaps positions `i` and `j = (x * (i+1)) >> 64`,
/// with `x` the next 64-bit output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialReport {
    pub trials: u64,
    pub seed: u64,
    #[serde(serialize_with = "crate::serialize_rational")]
    pub mean_distinct: BigRational,
    /// Unbiased sample variance; zero for a single trial.
    #[serde(serialize_with = "crate::serialize_rational")]
    pub sample_variance: BigRational,
    pub min_distinct: u64,
    pub max_distinct: u64,
}

impl TrialReport {
    pub fn sample_stddev(&self) -> f64 {
        crate::rational_to_f64(&self.sample_variance).sqrt()
    }

    /// `|mean - expected| <= k * stddev / sqrt(trials)`, decided exactly by
    /// squaring both sides.
    pub fn within_sigmas(&self, expected: &BigRational, k: u64) -> bool {
        let gap = &self.mean_distinct - expected;
        &gap * &gap * ratio(self.trials, 1) <= ratio(k * k, 1) * &self.sample_variance
    }
}

fn shuffle<T>(rng: &mut SplitMix64, xs: &mut [T]) {
    for i in (1..xs.len()).rev() {
        let j = ((u128::from(rng.next_u64()) * (i as u128 + 1)) >> 64) as usize;
        xs.swap(i, j);
    }
}

fn distinct_cyclic<T: Scalar>(cycle: &[T], scratch: &mut Vec<T>) -> u64 {
    let n = cycle.len();
    scratch.clear();
    scratch.extend((0..n).map(|i| (cycle[(i + 1) % n].clone() - cycle[i].clone()).abs()));
    scratch.sort_unstable();
    scratch.dedup();
    scratch.len() as u64
}

pub fn monte_carlo_distinct<T: Scalar>(
    set: &RealSet<T>,
    trials: u64,
    seed: u64,
) -> Result<TrialReport, StatsError> {
    require(set.len(), 3)?;
    if trials == 0 {
        return Err(StatsError::NoTrials);
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut cycle = set.elements().to_vec();
    let mut scratch = Vec::with_capacity(cycle.len());
    let (mut sum, mut sum_sq) = (0u128, 0u128);
    let (mut lo, mut hi) = (u64::MAX, 0u64);
    for _ in 0..trials {
        cycle.clone_from_slice(set.elements());
        shuffle(&mut rng, &mut cycle);
        let k = distinct_cyclic(&cycle, &mut scratch);
        sum += u128::from(k);
        sum_sq += u128::from(k) * u128::from(k);
        lo = lo.min(k);
        hi = hi.max(k);
    }
    let t = u128::from(trials);
    let sample_variance = if trials > 1 {
        ratio(t * sum_sq - sum * sum, t * (t - 1))
    } else {
        BigRational::zero()
    };
    Ok(TrialReport {
        trials,
        seed,
        mean_distinct: ratio(sum, t),
        sample_variance,
        min_distinct: lo,
        max_distinct: hi,
    })
}

/// The Erdős–Turán Sidon set `{2pk + (k^2 mod p)}` for the smallest prime
/// `p >= n`, truncated to its first `n` elements.
pub fn erdos_turan_sidon(n: usize) -> RealSet<i64> {
    let p = (n.max(2)..).find(|&q| is_prime(q)).expect("primes are unbounded") as i64;
    RealSet::new((0..n as i64).map(|k| 2 * p * k + (k * k) % p).collect())
        .expect("distinct by construction")
}

/// A Sidon set with `extra` seeded random integers from its range mixed in.
pub fn near_sidon(n: usize, extra: usize, seed: u64) -> RealSet<i64> {
    let base = erdos_turan_sidon(n);
    let span = (*base.max() as u64).max(1) + 1;
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut elems: BTreeSet<i64> = base.elements().iter().copied().collect();
    while elems.len() < n + extra {
        elems.insert((rng.next_u64() % span) as i64);
    }
    RealSet::new(elems.into_iter().collect()).expect("nonempty")
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}
