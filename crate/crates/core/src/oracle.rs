//! Exhaustive backtracking searches used as ground truth.
//!
//! Everything here is exponential and meant for desk-scale inputs: paths on
//! `[n]` up to about `n = 13`, circular enumerations up to eight elements.
//! Searches that hit their node budget report [`SearchError::BudgetExhausted`]
//! instead of a partial answer, so "none found" always means proven none.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::{from_count, ratio, Scalar};
use crate::sequence::{halves_hold, lower_half_end, upper_half_start, GoodType, Permutation, RealSet};

/// Largest set size accepted by the circular-permutation enumerations.
pub const MAX_EXACT_SET: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget of {0} nodes exhausted")]
    BudgetExhausted(u64),
    #[error("set of size {n} exceeds the enumeration limit of {max}")]
    TooLarge { n: usize, max: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

/// Node limit for a backtracking search; zero means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl SearchBudget {
    pub const UNLIMITED: SearchBudget = SearchBudget { max_nodes: 0 };

    pub fn nodes(max_nodes: u64) -> Self {
        Self { max_nodes }
    }
}

struct NodeCounter {
    visited: u64,
    limit: u64,
}

impl NodeCounter {
    fn new(budget: SearchBudget) -> Self {
        Self { visited: 0, limit: budget.max_nodes }
    }

    fn tick(&mut self) -> Result<(), SearchError> {
        self.visited += 1;
        if self.limit != 0 && self.visited > self.limit {
            Err(SearchError::BudgetExhausted(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Backtracking state for orderings of `[n]` with distinct differences.
struct PathSearch<'a, F> {
    n: usize,
    halves: Option<GoodType>,
    path: Vec<usize>,
    used: Vec<bool>,
    diff_used: Vec<bool>,
    counter: &'a mut NodeCounter,
    visit: F,
}

impl<F: FnMut(&[usize]) -> ControlFlow<()>> PathSearch<'_, F> {
    fn allowed(&self, x: usize) -> bool {
        self.halves
            .is_none_or(|ty| position_in_half(self.n, self.path.len(), x, ty))
    }

    fn push(&mut self, x: usize) -> Result<ControlFlow<()>, SearchError> {
        self.counter.tick()?;
        self.used[x] = true;
        self.path.push(x);
        let flow = self.extend();
        self.path.pop();
        self.used[x] = false;
        flow
    }

    fn extend(&mut self) -> Result<ControlFlow<()>, SearchError> {
        if self.path.len() == self.n {
            return Ok((self.visit)(&self.path));
        }
        let last = *self.path.last().expect("path is seeded");
        for x in 1..=self.n {
            if self.used[x] || !self.allowed(x) {
                continue;
            }
            let d = x.abs_diff(last);
            if self.diff_used[d] {
                continue;
            }
            self.diff_used[d] = true;
            let flow = self.push(x);
            self.diff_used[d] = false;
            if flow?.is_break() {
                return Ok(ControlFlow::Break(()));
            }
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn position_in_half(n: usize, pos: usize, x: usize, ty: GoodType) -> bool {
    let c = upper_half_start(n);
    let h = lower_half_end(n);
    let odd_position = pos.is_multiple_of(2);
    match ty {
        GoodType::Type1 => (x >= c) == odd_position,
        GoodType::Type2 => (x <= h) == odd_position,
    }
}

fn search_paths<F>(
    n: usize,
    start: Option<usize>,
    halves: Option<GoodType>,
    counter: &mut NodeCounter,
    visit: F,
) -> Result<(), SearchError>
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    if n == 0 {
        return Err(SearchError::InvalidInput("n must be at least 1".into()));
    }
    if let Some(s) = start {
        if s == 0 || s > n {
            return Err(SearchError::InvalidInput(format!("start {s} outside 1..={n}")));
        }
    }
    let mut search = PathSearch {
        n,
        halves,
        path: Vec::with_capacity(n),
        used: vec![false; n + 1],
        diff_used: vec![false; n],
        counter,
        visit,
    };
    let starts: Vec<usize> = match start {
        Some(s) => vec![s],
        None => (1..=n).collect(),
    };
    for s in starts {
        if search.allowed(s) && search.push(s)?.is_break() {
            break;
        }
    }
    Ok(())
}

/// Calls `visit` on every permutation of `[n]` (from `start`, if given) with
/// distinct consecutive differences, in lexicographic order, until it breaks.
pub fn for_each_graceful_path<F>(
    n: usize,
    start: Option<usize>,
    budget: SearchBudget,
    mut visit: F,
) -> Result<(), SearchError>
where
    F: FnMut(&Permutation) -> ControlFlow<()>,
{
    let mut counter = NodeCounter::new(budget);
    search_paths(n, start, None, &mut counter, |seq| {
        visit(&Permutation::from_vec_unchecked(seq.to_vec()))
    })
}

/// All graceful permutations of `[n]` (from `start`, if given), lexicographic.
pub fn enumerate_graceful_paths(
    n: usize,
    start: Option<usize>,
    budget: SearchBudget,
) -> Result<Vec<Permutation>, SearchError> {
    let mut out = Vec::new();
    for_each_graceful_path(n, start, budget, |p| {
        out.push(p.clone());
        ControlFlow::Continue(())
    })?;
    Ok(out)
}

/// Whether any graceful permutation of `[n]` starts at `s`.
pub fn exists_path(n: usize, s: usize, budget: SearchBudget) -> Result<bool, SearchError> {
    let mut found = false;
    for_each_graceful_path(n, Some(s), budget, |_| {
        found = true;
        ControlFlow::Break(())
    })?;
    Ok(found)
}

/// The lexicographically first good permutation of `[n]` starting at `s`
/// of the requested type (`None` = either).
pub fn find_good(
    n: usize,
    s: usize,
    want: Option<GoodType>,
    budget: SearchBudget,
) -> Result<Option<Permutation>, SearchError> {
    let mut counter = NodeCounter::new(budget);
    let types = match want {
        Some(t) => vec![t],
        None => vec![GoodType::Type1, GoodType::Type2],
    };
    let mut best: Option<Vec<usize>> = None;
    for ty in types {
        search_paths(n, Some(s), Some(ty), &mut counter, |seq| {
            debug_assert!(halves_hold(seq, ty));
            if best.as_deref().is_none_or(|b| seq < b) {
                best = Some(seq.to_vec());
            }
            ControlFlow::Break(())
        })?;
    }
    Ok(best.map(Permutation::from_vec_unchecked))
}

/// Whether some good permutation of `[n]` of the requested type starts at `s`.
pub fn exists_good(
    n: usize,
    s: usize,
    want: Option<GoodType>,
    budget: SearchBudget,
) -> Result<bool, SearchError> {
    Ok(find_good(n, s, want, budget)?.is_some())
}

/// Graceful permutations of `[n]` counted by the parities of their endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityCensus {
    pub n: usize,
    /// `counts[a_1 % 2][a_n % 2]`.
    pub counts: [[u64; 2]; 2],
}

impl ParityCensus {
    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn equal_parity(&self) -> u64 {
        self.counts[0][0] + self.counts[1][1]
    }

    pub fn opposite_parity(&self) -> u64 {
        self.counts[0][1] + self.counts[1][0]
    }

    /// Parity every graceful permutation's endpoints must sum to:
    /// the differences are `1..n-1`, totalling `n(n-1)/2`.
    pub fn predicted_endpoint_parity(n: usize) -> usize {
        (n * (n.saturating_sub(1)) / 2) % 2
    }
}

pub fn parity_census(n: usize, budget: SearchBudget) -> Result<ParityCensus, SearchError> {
    let mut counts = [[0u64; 2]; 2];
    for_each_graceful_path(n, None, budget, |p| {
        counts[p.start() % 2][p.end() % 2] += 1;
        ControlFlow::Continue(())
    })?;
    Ok(ParityCensus { n, counts })
}

fn require_min_size<T: Scalar>(set: &RealSet<T>, min: usize) -> Result<(), SearchError> {
    if set.len() < min {
        Err(SearchError::InvalidInput(format!(
            "need at least {min} elements, got {}",
            set.len()
        )))
    } else {
        Ok(())
    }
}

struct CycleSearch<'a, T> {
    elems: &'a [T],
    order: Vec<usize>,
    used: Vec<bool>,
    diffs: Vec<T>,
    counter: NodeCounter,
}

impl<T: Scalar> CycleSearch<'_, T> {
    fn extend(&mut self) -> Result<bool, SearchError> {
        self.counter.tick()?;
        let n = self.elems.len();
        let last = &self.elems[*self.order.last().expect("seeded")];
        if self.order.len() == n {
            let wrap = (self.elems[0].clone() - last.clone()).abs();
            // canonical orientation: second element below the last one
            return Ok(!self.diffs.contains(&wrap) && self.order[1] < self.order[n - 1]);
        }
        for j in 1..n {
            if self.used[j] {
                continue;
            }
            let d = (self.elems[j].clone() - last.clone()).abs();
            if self.diffs.contains(&d) {
                continue;
            }
            self.used[j] = true;
            self.order.push(j);
            self.diffs.push(d);
            if self.extend()? {
                return Ok(true);
            }
            self.diffs.pop();
            self.order.pop();
            self.used[j] = false;
        }
        Ok(false)
    }
}

/// A cyclic ordering of `set` whose `n` differences, wrap-around included,
/// are pairwise distinct. Canonical form: the minimum first, and the second
/// element smaller than the last. `Ok(None)` means proven none.
pub fn graceful_cycle_search<T: Scalar>(
    set: &RealSet<T>,
    budget: SearchBudget,
) -> Result<Option<Vec<T>>, SearchError> {
    require_min_size(set, 3)?;
    let n = set.len();
    let mut used = vec![false; n];
    used[0] = true;
    let mut search = CycleSearch {
        elems: set.elements(),
        order: vec![0],
        used,
        diffs: Vec::with_capacity(n),
        counter: NodeCounter::new(budget),
    };
    Ok(search
        .extend()?
        .then(|| search.order.iter().map(|&i| set.elements()[i].clone()).collect()))
}

/// The positive difference set `(A - A)+`.
pub(crate) fn positive_differences<T: Scalar>(set: &RealSet<T>) -> BTreeSet<T> {
    let e = set.elements();
    let mut out = BTreeSet::new();
    for (i, a) in e.iter().enumerate() {
        for b in &e[i + 1..] {
            out.insert(b.clone() - a.clone());
        }
    }
    out
}

/// Parity obstruction for graceful cycles on an integer set: when the
/// diameter is at most `n` and there are exactly `n` positive differences,
/// a graceful cycle would use each of `1..=n` once. Going around the cycle
/// the signed differences sum to zero, so `n(n+1)/2` would be even, which
/// fails for `n = 1, 2 mod 4`.
pub fn cycle_parity_obstructed<T: Scalar>(set: &RealSet<T>) -> Result<bool, SearchError> {
    if let Some(x) = set.elements().iter().find(|x| !x.is_integral()) {
        return Err(SearchError::InvalidInput(format!("{x} is not an integer")));
    }
    let n = set.len();
    let diameter = set.max().clone() - set.min().clone();
    Ok(diameter <= from_count::<T>(n)
        && positive_differences(set).len() == n
        && matches!(n % 4, 1 | 2))
}

/// Visits one representative of every circular arrangement of `set` up to
/// rotation and reflection: element 0 first, second index below the last.
fn for_each_cycle_class<T: Scalar>(set: &RealSet<T>, mut visit: impl FnMut(&[T])) {
    fn rec<T: Scalar>(
        elems: &[T],
        order: &mut Vec<T>,
        first_pick: usize,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[T]),
    ) {
        let n = elems.len();
        if order.len() == n {
            visit(order);
            return;
        }
        for j in 1..n {
            // the last position must hold a larger index than position 2
            if used[j] || (order.len() == n - 1 && j < first_pick) {
                continue;
            }
            used[j] = true;
            order.push(elems[j].clone());
            let pick = if order.len() == 2 { j } else { first_pick };
            rec(elems, order, pick, used, visit);
            order.pop();
            used[j] = false;
        }
    }
    let elems = set.elements();
    let mut used = vec![false; elems.len()];
    let mut order = vec![elems[0].clone()];
    rec(elems, &mut order, 0, &mut used, &mut visit);
}

fn check_exact_size<T: Scalar>(set: &RealSet<T>) -> Result<(), SearchError> {
    require_min_size(set, 3)?;
    if set.len() > MAX_EXACT_SET {
        return Err(SearchError::TooLarge { n: set.len(), max: MAX_EXACT_SET });
    }
    Ok(())
}

fn distinct_cyclic_diffs<T: Scalar>(cycle: &[T]) -> BTreeSet<T> {
    let n = cycle.len();
    (0..n)
        .map(|i| (cycle[(i + 1) % n].clone() - cycle[i].clone()).abs())
        .collect()
}

/// Exact `E|d(a)|` for a uniformly random circular permutation `a` of `set`,
/// where `d(a)` is the set of its `n` cyclic differences. Every class up to
/// rotation and reflection has the same number of arrangements, so the mean
/// over classes is the mean over arrangements.
pub fn exact_expected_distinct<T: Scalar>(set: &RealSet<T>) -> Result<BigRational, SearchError> {
    check_exact_size(set)?;
    let (mut classes, mut total) = (0u64, 0u64);
    for_each_cycle_class(set, |c| {
        classes += 1;
        total += distinct_cyclic_diffs(c).len() as u64;
    });
    Ok(ratio(total, classes))
}

/// Exact probability that `d` occurs among the cyclic differences of a
/// uniformly random circular permutation of `set`.
pub fn exact_prob_diff_present<T: Scalar>(set: &RealSet<T>, d: &T) -> Result<BigRational, SearchError> {
    check_exact_size(set)?;
    if !d.is_positive() {
        return Err(SearchError::InvalidInput(format!("difference {d} is not positive")));
    }
    let (mut classes, mut hits) = (0u64, 0u64);
    for_each_cycle_class(set, |c| {
        classes += 1;
        if distinct_cyclic_diffs(c).contains(d) {
            hits += 1;
        }
    });
    Ok(ratio(hits, classes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::is_graceful_cycle;

    fn set(v: &[i64]) -> RealSet<i64> {
        RealSet::new(v.to_vec()).unwrap()
    }

    fn seqs(ps: &[Permutation]) -> Vec<Vec<usize>> {
        ps.iter().map(|p| p.as_slice().to_vec()).collect()
    }

    const FREE: SearchBudget = SearchBudget::UNLIMITED;

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            seqs(&enumerate_graceful_paths(3, Some(2), FREE).unwrap()),
            vec![vec![2, 1, 3], vec![2, 3, 1]]
        );
        let from1 = seqs(&enumerate_graceful_paths(4, Some(1), FREE).unwrap());
        assert!(from1.contains(&vec![1, 4, 2, 3]));
        assert_eq!(
            seqs(&enumerate_graceful_paths(2, None, FREE).unwrap()),
            vec![vec![1, 2], vec![2, 1]]
        );
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let all = enumerate_graceful_paths(7, None, FREE).unwrap();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn enumeration_matches_brute_force_filter() {
        // independent check: filter every permutation of [6]
        fn perms(rest: &mut Vec<usize>, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(acc.clone());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                acc.push(x);
                perms(rest, acc, out);
                acc.pop();
                rest.insert(i, x);
            }
        }
        let mut all = Vec::new();
        perms(&mut (1..=6).collect(), &mut Vec::new(), &mut all);
        let brute: Vec<Vec<usize>> = all
            .into_iter()
            .filter(|s| {
                let mut d: Vec<usize> = s.windows(2).map(|w| w[0].abs_diff(w[1])).collect();
                d.sort_unstable();
                d.dedup();
                d.len() == 5
            })
            .collect();
        assert_eq!(seqs(&enumerate_graceful_paths(6, None, FREE).unwrap()), brute);
    }

    #[test]
    fn graceful_permutation_counts() {
        let expected = [1, 2, 4, 4, 8, 24, 32, 40];
        for (n, &want) in (1..=8).zip(&expected) {
            assert_eq!(enumerate_graceful_paths(n, None, FREE).unwrap().len(), want, "n={n}");
        }
    }

    #[test]
    fn budget_is_reported_not_truncated() {
        let r = enumerate_graceful_paths(10, None, SearchBudget::nodes(50));
        assert_eq!(r, Err(SearchError::BudgetExhausted(50)));
        let r = graceful_cycle_search(&RealSet::interval(1, 9), SearchBudget::nodes(10));
        assert_eq!(r, Err(SearchError::BudgetExhausted(10)));
    }

    #[test]
    fn exists_good_examples() {
        assert!(!exists_good(5, 2, None, FREE).unwrap());
        assert!(!exists_good(5, 4, None, FREE).unwrap());
        assert!(exists_good(5, 1, None, FREE).unwrap());
        assert!(exists_good(3, 2, Some(GoodType::Type1), FREE).unwrap());
        assert!(!exists_good(4, 1, Some(GoodType::Type1), FREE).unwrap());
    }

    #[test]
    fn exists_good_candidates_at_five_two() {
        // the half-respecting orderings of [5] from 2 all repeat a difference
        for c in [[2, 4, 1, 5, 3], [2, 4, 3, 5, 1], [2, 5, 1, 4, 3], [2, 5, 3, 4, 1]] {
            let p = Permutation::new(c.to_vec()).unwrap();
            assert!(halves_hold(p.as_slice(), GoodType::Type2));
            assert!(!p.is_graceful());
        }
    }

    #[test]
    fn find_good_returns_a_good_sequence() {
        let p = find_good(8, 3, None, FREE).unwrap().unwrap();
        assert_eq!(p.start(), 3);
        assert!(crate::sequence::classify_good(&p).is_good());
    }

    #[test]
    fn parity_census_examples() {
        let c4 = parity_census(4, FREE).unwrap();
        assert_eq!(c4.opposite_parity(), 0);
        assert_eq!(c4.total(), 4);
        let c6 = parity_census(6, FREE).unwrap();
        assert_eq!(c6.equal_parity(), 0);
        assert_eq!(c6.total(), 24);
        let c2 = parity_census(2, FREE).unwrap();
        assert_eq!(c2.counts, [[0, 1], [1, 0]]);
    }

    #[test]
    fn cycle_search_examples() {
        let found = graceful_cycle_search(&set(&[0, 1, 3, 7]), FREE).unwrap();
        assert_eq!(found, Some(vec![0, 1, 3, 7]));
        for n in 3..=8 {
            assert_eq!(graceful_cycle_search(&RealSet::interval(1, n), FREE).unwrap(), None);
        }
        assert_eq!(graceful_cycle_search(&set(&[1, 2, 3, 4, 6]), FREE).unwrap(), None);
        assert!(graceful_cycle_search(&set(&[1, 2]), FREE).is_err());
    }

    #[test]
    fn found_cycles_are_canonical_and_valid() {
        let a = set(&[0, 1, 4, 9, 11, 20]);
        let c = graceful_cycle_search(&a, FREE).unwrap().unwrap();
        assert_eq!(c[0], 0);
        assert!(c[1] < c[c.len() - 1]);
        assert!(is_graceful_cycle(&c));
    }

    #[test]
    fn obstruction_examples() {
        assert!(cycle_parity_obstructed(&set(&[1, 2, 3, 4, 6])).unwrap());
        assert!(!cycle_parity_obstructed(&RealSet::interval(1, 6)).unwrap());
        assert!(!cycle_parity_obstructed(&set(&[0, 1, 3, 7])).unwrap());
        let frac = RealSet::new(vec![num_rational::Ratio::new(1i64, 2)]).unwrap();
        assert!(cycle_parity_obstructed(&frac).is_err());
    }

    #[test]
    fn class_enumeration_counts() {
        for n in 3..=8i64 {
            let mut classes = 0usize;
            for_each_cycle_class(&RealSet::interval(1, n), |_| classes += 1);
            let fact: usize = (1..n as usize).product();
            assert_eq!(classes, fact / 2, "n={n}");
        }
    }

    #[test]
    fn expected_distinct_examples() {
        assert_eq!(exact_expected_distinct(&RealSet::interval(1, 4)).unwrap(), ratio(7, 3));
        assert_eq!(exact_expected_distinct(&RealSet::interval(1, 3)).unwrap(), ratio(2, 1));
        assert_eq!(exact_expected_distinct(&set(&[-5, 10, 25])).unwrap(), ratio(2, 1));
        assert!(matches!(
            exact_expected_distinct(&RealSet::interval(1, 9)),
            Err(SearchError::TooLarge { n: 9, max: 8 })
        ));
    }

    #[test]
    fn prob_present_examples() {
        let a4 = RealSet::interval(1, 4);
        assert_eq!(exact_prob_diff_present(&a4, &3).unwrap(), ratio(2, 3));
        assert_eq!(exact_prob_diff_present(&RealSet::interval(1, 3), &2).unwrap(), ratio(1, 1));
        assert_eq!(exact_prob_diff_present(&a4, &100).unwrap(), ratio(0, 1));
        assert!(exact_prob_diff_present(&a4, &0).is_err());
    }

    #[test]
    fn expectation_is_sum_of_presence_probabilities() {
        for v in [&[1i64, 2, 3, 4, 5][..], &[0, 1, 3, 7, 12], &[2, 3, 5, 8, 13, 21, 34]] {
            let a = set(v);
            let sum: BigRational = positive_differences(&a)
                .iter()
                .map(|d| exact_prob_diff_present(&a, d).unwrap())
                .sum();
            assert_eq!(exact_expected_distinct(&a).unwrap(), sum);
        }
    }
}
