//! Constructive recursion for graceful permutations of `[n]` with a
//! prescribed start.
//!
//! A construction is first planned as a post-order list of rule
//! applications ([`ConstructionTrace`]) and then evaluated by replaying that
//! list on a small stack machine. The plan is a chain: every rule has at most
//! one sub-problem, so planning is a loop rather than a recursion.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::sequence::{
    classify_good, lower_half_end, upper_half_start, GoodClass, GoodType, Permutation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("start {s} is outside 1..={n}")]
    StartOutOfRange { n: usize, s: usize },
    #[error("n must be at least 1")]
    EmptyGroundSet,
    #[error("no good sequence of [{n}] from {s} is constructed{}: {reason}", want.map(|w| format!(" ({w})")).unwrap_or_default())]
    Infeasible {
        n: usize,
        s: usize,
        want: Option<GoodType>,
        reason: String,
    },
    #[error("transform precondition violated: {0}")]
    Precondition(String),
    #[error("trace replay failed: {0}")]
    Replay(String),
    #[error("internal error: constructed sequence failed verification: {0}")]
    Internal(String),
}

/// One rule application.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "rule")]
pub enum Rule {
    /// `(1, n, 2, n-1, ...)`.
    BaseZigzag,
    /// Prefix `(s, n-s+1, s-1, n-s+2, ..., 1, n)`, then the sub-solution on
    /// `[n-2s]` shifted up by `s`.
    Case1 { s: usize },
    /// Prefix `(s, n-s+2, s-1, ..., 2, n, 1)`, then the sub-solution on
    /// `[n-2s+1]` shifted up by `s`.
    Case2 { s: usize },
    /// `a_i -> n+1-a_i`.
    Reflect,
    ShiftType1to2,
    ShiftType2to1,
    /// Explicit non-good sequence for the exceptional start when `n = 1 mod 4`.
    SpecialN1Mod4,
    /// Explicit good sequence for the middle start `(floor((n+1)/2)+1)/2` when `n = 2 mod 4`.
    SpecialN2Mod4,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Case1 { s } => write!(f, "Case1{{s={s}}}"),
            Rule::Case2 { s } => write!(f, "Case2{{s={s}}}"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// A rule together with the sub-problem whose solution it produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Step {
    #[serde(flatten)]
    pub rule: Rule,
    pub n: usize,
    pub start: usize,
    /// Requested good type of this sub-problem; `None` when any is fine
    /// (or, for the exceptional schema, when the result is not good).
    pub want: Option<GoodType>,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} s={}", self.rule, self.n, self.start)?;
        match self.want {
            Some(w) => write!(f, " want={w}"),
            None => write!(f, " want=Any"),
        }
    }
}

/// Post-order list of rule applications. Leaves push a sequence, the other
/// rules transform the top of the stack.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct ConstructionTrace {
    steps: Vec<Step>,
}

impl ConstructionTrace {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Re-evaluates the steps and returns the permutation they describe.
    pub fn replay(&self) -> Result<Permutation, ConstructError> {
        let mut stack: Vec<Vec<usize>> = Vec::new();
        let pop = |stack: &mut Vec<Vec<usize>>, step: &Step| {
            stack
                .pop()
                .ok_or_else(|| ConstructError::Replay(format!("`{step}` has no operand")))
        };
        for step in &self.steps {
            let n = step.n;
            let out = match step.rule {
                Rule::BaseZigzag => zigzag_vec(n),
                Rule::SpecialN1Mod4 => special_sequence(n, step.start, Alternation::UpFirst),
                Rule::SpecialN2Mod4 => special_sequence(n, step.start, Alternation::DownFirst),
                Rule::Reflect => reflect_vec(&pop(&mut stack, step)?),
                Rule::ShiftType1to2 => shift_vec(&pop(&mut stack, step)?, GoodType::Type1),
                Rule::ShiftType2to1 => shift_vec(&pop(&mut stack, step)?, GoodType::Type2),
                Rule::Case1 { s } | Rule::Case2 { s } => {
                    let (mut seq, sub_n) = match step.rule {
                        Rule::Case1 { .. } => (case1_prefix(n, s), n - 2 * s),
                        _ => (case2_prefix(n, s), n - 2 * s + 1),
                    };
                    let sub = pop(&mut stack, step)?;
                    if sub.len() != sub_n {
                        return Err(ConstructError::Replay(format!(
                            "`{step}` expects a sub-solution on [{sub_n}], got length {}",
                            sub.len()
                        )));
                    }
                    seq.extend(sub.into_iter().map(|x| x + s));
                    seq
                }
            };
            if out.len() != n || out.first() != Some(&step.start) {
                return Err(ConstructError::Replay(format!(
                    "`{step}` produced {out:?}"
                )));
            }
            stack.push(out);
        }
        match (stack.pop(), stack.is_empty()) {
            (Some(seq), true) => Permutation::new(seq)
                .map_err(|e| ConstructError::Replay(e.to_string())),
            _ => Err(ConstructError::Replay(format!(
                "trace leaves {} values on the stack",
                stack.len() + 1
            ))),
        }
    }
}

impl fmt::Display for ConstructionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.steps.iter().enumerate() {
            writeln!(f, "{:>3}. {step}", i + 1)?;
        }
        Ok(())
    }
}

fn zigzag_vec(n: usize) -> Vec<usize> {
    let (mut lo, mut hi) = (1, n);
    (0..n)
        .map(|i| {
            if i % 2 == 0 {
                lo += 1;
                lo - 1
            } else {
                hi -= 1;
                hi + 1
            }
        })
        .collect()
}

fn reflect_vec(seq: &[usize]) -> Vec<usize> {
    let n = seq.len();
    seq.iter().map(|&x| n + 1 - x).collect()
}

/// Shifts a sequence of type `from` into the opposite type.
fn shift_vec(seq: &[usize], from: GoodType) -> Vec<usize> {
    let n = seq.len();
    let (down, up) = (n / 2, n.div_ceil(2));
    seq.iter()
        .enumerate()
        .map(|(i, &x)| match (from, i % 2 == 0) {
            (GoodType::Type1, true) => x - down,
            (GoodType::Type1, false) => x + up,
            (GoodType::Type2, true) => x + down,
            (GoodType::Type2, false) => x - up,
        })
        .collect()
}

fn case1_prefix(n: usize, s: usize) -> Vec<usize> {
    (0..s).flat_map(|j| [s - j, n - s + 1 + j]).collect()
}

fn case2_prefix(n: usize, s: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..s - 1).flat_map(|j| [s - j, n - s + 2 + j]).collect();
    v.push(1);
    v
}

#[derive(Clone, Copy)]
enum Alternation {
    UpFirst,
    DownFirst,
}

/// The Case 2 prefix, then the centre `n-2s+2` and an outward alternation
/// covering `s+1..=n-s+1`.
fn special_sequence(n: usize, s: usize, alt: Alternation) -> Vec<usize> {
    let mut v = case2_prefix(n, s);
    let centre = n - 2 * s + 2;
    let (lo, hi) = (s + 1, n - s + 1);
    v.push(centre);
    'outer: for k in 1.. {
        let pair = match alt {
            Alternation::UpFirst => [centre.checked_add(k), centre.checked_sub(k)],
            Alternation::DownFirst => [centre.checked_sub(k), centre.checked_add(k)],
        };
        for x in pair {
            match x {
                Some(x) if (lo..=hi).contains(&x) => v.push(x),
                _ => break 'outer,
            }
        }
    }
    v
}

/// `(1, n, 2, n-1, ...)`: good of Type2, starting at 1.
pub fn zigzag(n: usize) -> Permutation {
    Permutation::from_vec_unchecked(zigzag_vec(n))
}

fn require_type(p: &Permutation, ty: Option<GoodType>) -> Result<GoodClass, ConstructError> {
    let class = classify_good(p);
    if class.satisfies(ty) {
        Ok(class)
    } else {
        Err(ConstructError::Precondition(format!(
            "({p}) is {class}, expected {}",
            ty.map_or("a good sequence".to_string(), |t| format!("good of {t}"))
        )))
    }
}

/// `b_i = n + 1 - a_i`. The input must be good; the output is good of the
/// opposite type with the same differences.
pub fn reflect(p: &Permutation) -> Result<Permutation, ConstructError> {
    require_type(p, None)?;
    Ok(Permutation::from_vec_unchecked(reflect_vec(p.as_slice())))
}

/// Odd positions drop by `floor(n/2)`, even positions rise by
/// `floor((n+1)/2)`. Every difference `d` becomes `n - d`.
pub fn shift_type1_to_type2(p: &Permutation) -> Result<Permutation, ConstructError> {
    require_type(p, Some(GoodType::Type1))?;
    Ok(Permutation::from_vec_unchecked(shift_vec(p.as_slice(), GoodType::Type1)))
}

/// Inverse of [`shift_type1_to_type2`].
pub fn shift_type2_to_type1(p: &Permutation) -> Result<Permutation, ConstructError> {
    require_type(p, Some(GoodType::Type2))?;
    Ok(Permutation::from_vec_unchecked(shift_vec(p.as_slice(), GoodType::Type2)))
}

/// For `n = 1 mod 4` (and `n >= 5`), the start `(floor((n+1)/2) + 1) / 2`
/// that the recursion cannot make good. Its mirror `n + 1 - s*` is equally
/// exceptional.
pub fn exceptional_start(n: usize) -> Option<usize> {
    (n % 4 == 1 && n >= 5).then(|| lower_half_end(n).div_ceil(2))
}

pub fn is_exceptional(n: usize, s: usize) -> bool {
    exceptional_start(n).is_some_and(|e| s == e || s == n + 1 - e)
}

fn check_args(n: usize, s: usize) -> Result<(), ConstructError> {
    if n == 0 {
        Err(ConstructError::EmptyGroundSet)
    } else if s == 0 || s > n {
        Err(ConstructError::StartOutOfRange { n, s })
    } else {
        Ok(())
    }
}

fn plan_good(n: usize, s: usize, want: Option<GoodType>) -> Result<ConstructionTrace, ConstructError> {
    check_args(n, s)?;
    // Post-processing steps, outermost first.
    let mut pending: Vec<Step> = Vec::new();
    let (mut n, mut s, mut want) = (n, s, want);
    let leaf = loop {
        if is_exceptional(n, s) {
            return Err(ConstructError::Infeasible {
                n,
                s,
                want,
                reason: "exceptional start for n = 1 mod 4".into(),
            });
        }
        let h = lower_half_end(n);
        // Bring the start into the lower half; the work below builds Type2.
        let needs_reflect = if s <= h {
            want == Some(GoodType::Type1)
        } else {
            want != Some(GoodType::Type2)
        };
        let low_ok = s <= h && want != Some(GoodType::Type1);
        if needs_reflect && n + 1 - s <= h {
            pending.push(Step { rule: Rule::Reflect, n, start: s, want: Some(GoodType::Type1) });
            s = n + 1 - s;
        } else if !low_ok {
            let c = upper_half_start(n);
            return Err(ConstructError::Infeasible {
                n,
                s,
                want,
                reason: format!("a good sequence from {s} has odd positions {} {}",
                    if s >= c { "at least" } else { "at most" },
                    if s >= c { c } else { h }),
            });
        }
        want = Some(GoodType::Type2);

        if s == 1 {
            break Step { rule: Rule::BaseZigzag, n, start: 1, want };
        }
        if 2 * s <= h {
            if (n - 2 * s) % 4 != 1 {
                pending.push(Step { rule: Rule::Case1 { s }, n, start: s, want });
                n -= 2 * s;
            } else {
                pending.push(Step { rule: Rule::Case2 { s }, n, start: s, want });
                let sub_n = n - 2 * s + 1;
                s = n + 2 - 3 * s;
                n = sub_n;
                want = Some(GoodType::Type1);
            }
            continue;
        }
        if h % 2 == 1 && 2 * s == h + 1 {
            debug_assert_eq!(n % 4, 2);
            break Step { rule: Rule::SpecialN2Mod4, n, start: s, want };
        }
        // Mid-range start: build from h + 1 - s, reflect, then shift down.
        let sub_s = h + 1 - s;
        pending.push(Step { rule: Rule::ShiftType1to2, n, start: s, want });
        pending.push(Step { rule: Rule::Reflect, n, start: n + 1 - sub_s, want: Some(GoodType::Type1) });
        s = sub_s;
    };
    let mut steps = vec![leaf];
    steps.extend(pending.into_iter().rev());
    Ok(ConstructionTrace { steps })
}

fn finish(trace: ConstructionTrace) -> Result<(Permutation, ConstructionTrace), ConstructError> {
    let p = trace.replay()?;
    if !p.is_graceful() {
        return Err(ConstructError::Internal(format!("({p}) repeats a difference")));
    }
    Ok((p, trace))
}

/// A good permutation of `[n]` starting at `s`, of type `want` when given.
///
/// Fails with [`ConstructError::Infeasible`] at the exceptional starts for
/// `n = 1 mod 4`, and when the requested type cannot hold at `s` (a Type1
/// sequence starts in the upper half, a Type2 one in the lower half).
pub fn construct_good(
    n: usize,
    s: usize,
    want: Option<GoodType>,
) -> Result<(Permutation, ConstructionTrace), ConstructError> {
    let (p, trace) = finish(plan_good(n, s, want)?)?;
    if !classify_good(&p).satisfies(want) {
        return Err(ConstructError::Internal(format!("({p}) is not of the requested type")));
    }
    Ok((p, trace))
}

/// A permutation of `[n]` starting at `s` with pairwise-distinct consecutive
/// differences. It is good except at the exceptional starts for `n = 1 mod 4`.
pub fn construct_path(n: usize, s: usize) -> Result<(Permutation, ConstructionTrace), ConstructError> {
    check_args(n, s)?;
    match exceptional_start(n) {
        Some(e) if s == e || s == n + 1 - e => {
            let mut steps = vec![Step { rule: Rule::SpecialN1Mod4, n, start: e, want: None }];
            if s != e {
                steps.push(Step { rule: Rule::Reflect, n, start: s, want: None });
            }
            finish(ConstructionTrace { steps })
        }
        _ => construct_good(n, s, None),
    }
}
