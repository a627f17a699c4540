//! Exact domain types and the validity checks everything else builds on.
//!
//! Positions are 1-indexed in all documentation: `a_1` is the start of a
//! sequence and odd positions are `a_1, a_3, ...`.

use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{from_count, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequenceError {
    #[error("sequence of length {0} has no consecutive differences")]
    Degenerate(usize),
    #[error("sequence repeats the element {0}")]
    DuplicateElement(String),
    #[error("not a permutation of 1..={n}: {detail}")]
    NotAPermutation { n: usize, detail: String },
    #[error("arithmetic progression step must be nonzero")]
    ZeroStep,
    #[error("arithmetic progression must have at least one term")]
    EmptyProgression,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("set must contain at least one element")]
    EmptySet,
}

/// An ordering of `[n] = {1, ..., n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    seq: Vec<usize>,
}

impl Permutation {
    pub fn new(seq: Vec<usize>) -> Result<Self, SequenceError> {
        let n = seq.len();
        if n == 0 {
            return Err(SequenceError::NotAPermutation {
                n,
                detail: "empty sequence".into(),
            });
        }
        let mut seen = vec![false; n + 1];
        for &x in &seq {
            if x == 0 || x > n {
                return Err(SequenceError::NotAPermutation {
                    n,
                    detail: format!("entry {x} out of range"),
                });
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(SequenceError::NotAPermutation {
                    n,
                    detail: format!("entry {x} repeated"),
                });
            }
        }
        Ok(Self { seq })
    }

    /// Wraps a sequence already known to be a permutation of `[len]`.
    pub(crate) fn from_vec_unchecked(seq: Vec<usize>) -> Self {
        debug_assert!(Self::new(seq.clone()).is_ok(), "{seq:?}");
        Self { seq }
    }

    /// The identity ordering `(1, 2, ..., n)`.
    pub fn identity(n: usize) -> Self {
        Self::from_vec_unchecked((1..=n).collect())
    }

    pub fn n(&self) -> usize {
        self.seq.len()
    }

    pub fn start(&self) -> usize {
        self.seq[0]
    }

    pub fn end(&self) -> usize {
        self.seq[self.seq.len() - 1]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.seq
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.seq
    }

    /// Consecutive absolute differences `|a_{i+1} - a_i|`.
    pub fn diffs(&self) -> Vec<usize> {
        self.seq.windows(2).map(|w| w[0].abs_diff(w[1])).collect()
    }

    /// Consecutive differences pairwise distinct. On `[n]` this is the same
    /// as the difference set being exactly `{1, ..., n-1}`.
    pub fn is_graceful(&self) -> bool {
        let mut seen = vec![false; self.n()];
        self.diffs().into_iter().all(|d| !std::mem::replace(&mut seen[d], true))
    }

    pub fn reversed(&self) -> Self {
        Self::from_vec_unchecked(self.seq.iter().rev().copied().collect())
    }

    /// The entries as elements of an exact scalar type.
    pub fn to_scalars<T: Scalar>(&self) -> Vec<T> {
        self.seq.iter().map(|&x| from_count(x)).collect()
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.seq)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.seq.serialize(serializer)
    }
}

pub(crate) fn write_joined<T: fmt::Display>(f: &mut fmt::Formatter<'_>, xs: &[T]) -> fmt::Result {
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

/// The two kinds of good sequence.
///
/// `Type1`: odd positions hold values `>= ceil((n+1)/2)`, even positions
/// values below it. `Type2`: odd positions hold values `<= floor((n+1)/2)`,
/// even positions values above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GoodType {
    Type1,
    Type2,
}

impl GoodType {
    pub fn opposite(self) -> Self {
        match self {
            GoodType::Type1 => GoodType::Type2,
            GoodType::Type2 => GoodType::Type1,
        }
    }
}

impl fmt::Display for GoodType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GoodType::Type1 => "Type1",
            GoodType::Type2 => "Type2",
        })
    }
}

/// Which good-sequence types a permutation satisfies. Empty means not good.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GoodClass {
    pub type1: bool,
    pub type2: bool,
}

impl GoodClass {
    pub const NOT_GOOD: GoodClass = GoodClass { type1: false, type2: false };

    pub fn is_good(self) -> bool {
        self.type1 || self.type2
    }

    pub fn contains(self, ty: GoodType) -> bool {
        match ty {
            GoodType::Type1 => self.type1,
            GoodType::Type2 => self.type2,
        }
    }

    /// `None` means any type is acceptable.
    pub fn satisfies(self, want: Option<GoodType>) -> bool {
        want.map_or(self.is_good(), |ty| self.contains(ty))
    }

    pub fn types(self) -> Vec<GoodType> {
        [GoodType::Type1, GoodType::Type2]
            .into_iter()
            .filter(|&t| self.contains(t))
            .collect()
    }
}

impl fmt::Display for GoodClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.is_good() {
            return f.write_str("NotGood");
        }
        let names: Vec<String> = self.types().iter().map(ToString::to_string).collect();
        f.write_str(&names.join("+"))
    }
}

impl Serialize for GoodClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.types().serialize(serializer)
    }
}

/// `ceil((n+1)/2)`, the lowest value of the upper half in a Type1 split.
pub fn upper_half_start(n: usize) -> usize {
    (n + 2) / 2
}

/// `floor((n+1)/2)`, the highest value of the lower half in a Type2 split.
pub fn lower_half_end(n: usize) -> usize {
    n.div_ceil(2)
}

/// Whether the half conditions of `ty` hold, ignoring differences.
pub(crate) fn halves_hold(seq: &[usize], ty: GoodType) -> bool {
    let n = seq.len();
    seq.iter().enumerate().all(|(i, &x)| {
        // i is 0-based, so even i is an odd position
        let odd_position = i % 2 == 0;
        match ty {
            GoodType::Type1 => {
                let c = upper_half_start(n);
                if odd_position { x >= c } else { x < c }
            }
            GoodType::Type2 => {
                let h = lower_half_end(n);
                if odd_position { x <= h } else { x > h }
            }
        }
    })
}

pub fn classify_good(p: &Permutation) -> GoodClass {
    if !p.is_graceful() {
        return GoodClass::NOT_GOOD;
    }
    GoodClass {
        type1: halves_hold(p.as_slice(), GoodType::Type1),
        type2: halves_hold(p.as_slice(), GoodType::Type2),
    }
}

/// A finite arithmetic progression `first, first + step, ...` of `length` terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApSpec<T> {
    first: T,
    step: T,
    length: usize,
}

impl<T: Scalar> ApSpec<T> {
    pub fn new(first: T, step: T, length: usize) -> Result<Self, SequenceError> {
        if step.is_zero() {
            return Err(SequenceError::ZeroStep);
        }
        if length == 0 {
            return Err(SequenceError::EmptyProgression);
        }
        Ok(Self { first, step, length })
    }

    pub fn first(&self) -> &T {
        &self.first
    }

    pub fn step(&self) -> &T {
        &self.step
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// The `k`-th term, 1-indexed.
    pub fn term(&self, k: usize) -> T {
        self.first.clone() + from_count::<T>(k - 1) * self.step.clone()
    }

    pub fn to_set(&self) -> RealSet<T> {
        RealSet::new((1..=self.length).map(|k| self.term(k)).collect())
            .expect("progression terms are distinct")
    }
}

/// Finite set of distinct exact numbers, kept sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RealSet<T> {
    elements: Vec<T>,
}

impl<T: Scalar> RealSet<T> {
    pub fn new(mut elements: Vec<T>) -> Result<Self, SequenceError> {
        if elements.is_empty() {
            return Err(SequenceError::EmptySet);
        }
        elements.sort();
        if let Some(w) = elements.windows(2).find(|w| w[0] == w[1]) {
            return Err(SequenceError::DuplicateElement(w[0].to_string()));
        }
        Ok(Self { elements })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn contains(&self, x: &T) -> bool {
        self.elements.binary_search(x).is_ok()
    }

    pub fn min(&self) -> &T {
        &self.elements[0]
    }

    pub fn max(&self) -> &T {
        &self.elements[self.elements.len() - 1]
    }

    /// Image under `x -> scale * x + shift`; `scale` must be nonzero.
    pub fn affine_image(&self, scale: &T, shift: &T) -> Self {
        assert!(!scale.is_zero(), "affine scale must be nonzero");
        Self::new(
            self.elements
                .iter()
                .map(|x| scale.clone() * x.clone() + shift.clone())
                .collect(),
        )
        .expect("injective image of a set")
    }
}

impl RealSet<i64> {
    /// The integer interval `lo..=hi`.
    pub fn interval(lo: i64, hi: i64) -> Self {
        Self::new((lo..=hi).collect()).expect("nonempty interval")
    }
}

impl<T: Scalar> fmt::Display for RealSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        write_joined(f, &self.elements)?;
        f.write_str("}")
    }
}

fn check_distinct<T: Scalar>(seq: &[T]) -> Result<(), SequenceError> {
    let mut seen = HashSet::with_capacity(seq.len());
    for x in seq {
        if !seen.insert(x) {
            return Err(SequenceError::DuplicateElement(x.to_string()));
        }
    }
    Ok(())
}

/// `|seq[i+1] - seq[i]|` for each consecutive pair.
pub fn abs_diffs<T: Scalar>(seq: &[T]) -> Result<Vec<T>, SequenceError> {
    if seq.len() < 2 {
        return Err(SequenceError::Degenerate(seq.len()));
    }
    check_distinct(seq)?;
    Ok(seq
        .windows(2)
        .map(|w| (w[1].clone() - w[0].clone()).abs())
        .collect())
}

/// Like [`abs_diffs`] but also includes the wrap-around `|seq[0] - seq[last]|`.
pub fn cyclic_abs_diffs<T: Scalar>(seq: &[T]) -> Result<Vec<T>, SequenceError> {
    let mut diffs = abs_diffs(seq)?;
    diffs.push((seq[0].clone() - seq[seq.len() - 1].clone()).abs());
    Ok(diffs)
}

fn all_distinct<T: Scalar>(values: &[T]) -> bool {
    let mut seen = HashSet::with_capacity(values.len());
    values.iter().all(|v| seen.insert(v))
}

/// True iff the consecutive absolute differences are pairwise distinct.
///
/// Sequences shorter than two are vacuously graceful. A sequence that
/// repeats an element is never graceful.
pub fn is_graceful_path<T: Scalar>(seq: &[T]) -> bool {
    if seq.len() < 2 {
        return true;
    }
    abs_diffs(seq).is_ok_and(|d| all_distinct(&d))
}

/// True iff the `n` differences around the closed cycle are pairwise distinct.
pub fn is_graceful_cycle<T: Scalar>(seq: &[T]) -> bool {
    cyclic_abs_diffs(seq).is_ok_and(|d| all_distinct(&d))
}

/// Maps `[n]` onto the progression: entry `k` becomes `first + (k-1) * step`.
pub fn ap_map<T: Scalar>(p: &Permutation, ap: &ApSpec<T>) -> Result<Vec<T>, SequenceError> {
    if ap.length() != p.n() {
        return Err(SequenceError::LengthMismatch {
            expected: ap.length(),
            found: p.n(),
        });
    }
    Ok(p.as_slice().iter().map(|&k| ap.term(k)).collect())
}

/// Outcome of checking a candidate path (or cycle) over a set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Valid,
    NotAPermutation,
    WrongStart,
    RepeatedDifference,
}

impl Verdict {
    pub fn is_valid(self) -> bool {
        self == Verdict::Valid
    }

    pub fn code(self) -> &'static str {
        match self {
            Verdict::Valid => "valid",
            Verdict::NotAPermutation => "not-a-permutation",
            Verdict::WrongStart => "wrong-start",
            Verdict::RepeatedDifference => "repeated-difference",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

fn is_permutation_of<T: Scalar>(seq: &[T], set: &RealSet<T>) -> bool {
    let mut sorted = seq.to_vec();
    sorted.sort();
    sorted == set.elements()
}

/// Checks one instance of the distinct-differences path problem: `seq` must
/// order all of `set`, begin at `start`, and have distinct consecutive
/// differences. Conditions are checked in that order.
pub fn verify_conjecture_instance<T: Scalar>(start: &T, seq: &[T], set: &RealSet<T>) -> Verdict {
    if !is_permutation_of(seq, set) {
        Verdict::NotAPermutation
    } else if &seq[0] != start {
        Verdict::WrongStart
    } else if !is_graceful_path(seq) {
        Verdict::RepeatedDifference
    } else {
        Verdict::Valid
    }
}

/// Cycle counterpart of [`verify_conjecture_instance`]; any rotation is accepted.
pub fn verify_cycle_instance<T: Scalar>(seq: &[T], set: &RealSet<T>) -> Verdict {
    if !is_permutation_of(seq, set) {
        Verdict::NotAPermutation
    } else if !is_graceful_cycle(seq) {
        Verdict::RepeatedDifference
    } else {
        Verdict::Valid
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;
    use proptest::prelude::*;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    fn q(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn abs_diffs_examples() {
        assert_eq!(abs_diffs(&[1i64, 6, 2, 5, 3, 4]).unwrap(), vec![5, 4, 3, 2, 1]);
        assert_eq!(abs_diffs(&[2i64, 5, 1, 3, 4]).unwrap(), vec![3, 4, 2, 1]);
        assert_eq!(abs_diffs(&[1i64, 2]).unwrap(), vec![1]);
    }

    #[test]
    fn abs_diffs_rejects_degenerate_and_repeats() {
        assert_eq!(abs_diffs(&[3i64]), Err(SequenceError::Degenerate(1)));
        assert_eq!(abs_diffs::<i64>(&[]), Err(SequenceError::Degenerate(0)));
        assert!(matches!(
            abs_diffs(&[1i64, 2, 1]),
            Err(SequenceError::DuplicateElement(_))
        ));
    }

    #[test]
    fn graceful_examples() {
        assert!(is_graceful_path(&[1i64, 6, 2, 5, 3, 4]));
        assert!(!is_graceful_path(&[1i64, 2, 3]));
        assert!(!is_graceful_path(&[2i64, 4, 1, 5, 3]));
        assert!(is_graceful_path(&[7i64]));
        // distinct differences but a repeated element
        assert!(!is_graceful_path(&[1i64, 2, 4, 1]));
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![]).is_err());
        assert!(Permutation::new(vec![1, 1]).is_err());
        assert!(Permutation::new(vec![0, 1]).is_err());
        assert!(Permutation::new(vec![1, 3]).is_err());
        let p = perm(&[2, 3, 1]);
        assert_eq!((p.n(), p.start(), p.end()), (3, 2, 1));
        assert_eq!(p.to_string(), "2,3,1");
    }

    #[test]
    fn classify_examples() {
        let c = classify_good(&perm(&[1, 6, 2, 5, 3, 4]));
        assert_eq!(c, GoodClass { type1: false, type2: true });
        let c = classify_good(&perm(&[2, 3, 1]));
        assert_eq!(c, GoodClass { type1: false, type2: true });
        assert!(!classify_good(&perm(&[1, 2, 3])).is_good());
        assert_eq!(classify_good(&perm(&[1, 2, 3])).to_string(), "NotGood");
    }

    #[test]
    fn singleton_is_both_types() {
        let c = classify_good(&perm(&[1]));
        assert!(c.type1 && c.type2);
    }

    #[test]
    fn odd_middle_start_can_be_both_types() {
        // n = 3: middle value 2; (2,1,3) is Type1, (2,3,1) is Type2
        assert_eq!(classify_good(&perm(&[2, 1, 3])).types(), vec![GoodType::Type1]);
        // n = 1 aside, both halves can only hold simultaneously at the middle
        // value itself, so a longer sequence is never both.
        for p in crate::oracle::enumerate_graceful_paths(5, None, Default::default()).unwrap() {
            let c = classify_good(&p);
            assert!(!(c.type1 && c.type2), "{p}");
        }
    }

    #[test]
    fn ap_map_examples() {
        let ap = ApSpec::new(10i64, 5, 3).unwrap();
        assert_eq!(ap_map(&perm(&[1, 3, 2]), &ap).unwrap(), vec![10, 20, 15]);

        let ap = ApSpec::new(0i64, -2, 6).unwrap();
        assert_eq!(
            ap_map(&perm(&[1, 6, 2, 5, 3, 4]), &ap).unwrap(),
            vec![0, -10, -2, -8, -4, -6]
        );

        let ap = ApSpec::new(q(1, 2), q(1, 3), 5).unwrap();
        assert_eq!(
            ap_map(&perm(&[2, 5, 1, 3, 4]), &ap).unwrap(),
            vec![q(5, 6), q(11, 6), q(1, 2), q(7, 6), q(3, 2)]
        );
    }

    #[test]
    fn ap_map_length_mismatch() {
        let ap = ApSpec::new(0i64, 1, 4).unwrap();
        assert_eq!(
            ap_map(&perm(&[1, 2, 3]), &ap),
            Err(SequenceError::LengthMismatch { expected: 4, found: 3 })
        );
        assert_eq!(ApSpec::new(0i64, 0, 4), Err(SequenceError::ZeroStep));
        assert_eq!(ApSpec::new(0i64, 1, 0), Err(SequenceError::EmptyProgression));
    }

    #[test]
    fn verify_instance_examples() {
        let a6 = RealSet::interval(1, 6);
        let seq = [1i64, 6, 2, 5, 3, 4];
        assert_eq!(verify_conjecture_instance(&1, &seq, &a6), Verdict::Valid);
        assert_eq!(verify_conjecture_instance(&2, &seq, &a6), Verdict::WrongStart);
        let a3 = RealSet::interval(1, 3);
        assert_eq!(
            verify_conjecture_instance(&1, &[1i64, 2, 3], &a3),
            Verdict::RepeatedDifference
        );
        assert_eq!(
            verify_conjecture_instance(&1, &[1i64, 2], &a3),
            Verdict::NotAPermutation
        );
    }

    #[test]
    fn verify_cycle_examples() {
        let a = RealSet::new(vec![0i64, 1, 3, 7]).unwrap();
        assert_eq!(verify_cycle_instance(&[0i64, 1, 3, 7], &a), Verdict::Valid);
        assert_eq!(verify_cycle_instance(&[3i64, 7, 0, 1], &a), Verdict::Valid);
        let b = RealSet::interval(1, 4);
        assert_eq!(verify_cycle_instance(&[1i64, 2, 4, 3], &b), Verdict::RepeatedDifference);
    }

    #[test]
    fn real_set_rejects_duplicates() {
        assert!(matches!(
            RealSet::new(vec![q(1, 2), q(2, 4)]),
            Err(SequenceError::DuplicateElement(_))
        ));
        assert_eq!(RealSet::<i64>::new(vec![]), Err(SequenceError::EmptySet));
        let s = RealSet::new(vec![3i64, -1, 2]).unwrap();
        assert_eq!(s.elements(), &[-1, 2, 3]);
        assert_eq!(s.to_string(), "{-1,2,3}");
    }

    fn any_permutation(max_n: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_n)
            .prop_flat_map(|n| Just((1..=n).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(Permutation::from_vec_unchecked)
    }

    proptest! {
        #[test]
        fn graceful_permutations_use_every_difference(p in any_permutation(9)) {
            if p.is_graceful() {
                let mut d = p.diffs();
                d.sort_unstable();
                prop_assert_eq!(d, (1..p.n()).collect::<Vec<_>>());
            }
        }

        #[test]
        fn generic_and_permutation_checks_agree(p in any_permutation(9)) {
            prop_assert_eq!(p.is_graceful(), is_graceful_path(&p.to_scalars::<i64>()));
        }

        #[test]
        fn good_implies_graceful(p in any_permutation(9)) {
            if classify_good(&p).is_good() {
                prop_assert!(p.is_graceful());
            }
        }

        #[test]
        fn ap_map_preserves_gracefulness(
            p in any_permutation(9),
            first in -50i64..50,
            num in -20i64..20,
            den in 1i64..7,
        ) {
            prop_assume!(num != 0);
            let ap = ApSpec::new(Ratio::from_integer(first), Ratio::new(num, den), p.n()).unwrap();
            let image = ap_map(&p, &ap).unwrap();
            prop_assert_eq!(p.is_graceful(), is_graceful_path(&image));
        }

        #[test]
        fn reversal_reverses_diffs(v in proptest::collection::hash_set(-100i64..100, 2..12)) {
            let seq: Vec<i64> = v.into_iter().collect();
            let rev: Vec<i64> = seq.iter().rev().copied().collect();
            let mut d = abs_diffs(&seq).unwrap();
            d.reverse();
            prop_assert_eq!(abs_diffs(&rev).unwrap(), d);
        }
    }
}
