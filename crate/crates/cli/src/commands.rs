use std::fmt::{Display, Write as _};

use gracepath::oracle::{self, SearchBudget, SearchError};
use gracepath::sequence::{cyclic_abs_diffs, RealSet};
use gracepath::stats;
use gracepath::{
    abs_diffs, ap_map, classify_good, construct_path, is_exceptional, rational_to_f64,
    verify_conjecture_instance, verify_cycle_instance, ApSpec, ConstructError, Rational,
    RationalSet, Scalar,
};
use serde_json::{json, Value};

use crate::input::{as_int_set, make_set, parse_list, read_list_file, read_list_stdin};
use crate::record::{emit, OutputRecord};
use crate::{
    ConstructArgs, CycleArgs, Format, SetSource, StatsArgs, SweepArgs, SweepMode, VerifyArgs,
    BUDGET_ENV, DEFAULT_BUDGET, EXIT_INTERNAL, EXIT_NEGATIVE, EXIT_USAGE,
};

/// Largest n the sweep will hand to the exhaustive oracle.
pub const ORACLE_NMAX: usize = 13;

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }
}

fn usage(e: impl Display) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<u8, Failure>;

fn construct_failure(e: ConstructError) -> Failure {
    match e {
        ConstructError::StartOutOfRange { .. } | ConstructError::EmptyGroundSet => usage(e),
        other => Failure::Internal(other.to_string()),
    }
}

fn resolve_budget(arg: Option<u64>) -> Result<SearchBudget, Failure> {
    if let Some(b) = arg {
        return Ok(SearchBudget::nodes(b));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(SearchBudget::nodes)
            .map_err(|_| usage(format!("{BUDGET_ENV}={v} is not a node count"))),
        Err(_) => Ok(SearchBudget::nodes(DEFAULT_BUDGET)),
    }
}

fn load_set(source: &SetSource) -> Result<RationalSet, Failure> {
    let elements = match (&source.set, &source.set_file) {
        (Some(text), _) => parse_list(text),
        (None, Some(path)) => read_list_file(path),
        (None, None) => return Err(usage("one of --set or --set-file is required")),
    }
    .map_err(usage)?;
    make_set(elements).map_err(usage)
}

fn strings<T: Display>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn joined<T: Display>(xs: &[T], sep: &str) -> String {
    strings(xs).join(sep)
}

fn rational_json(q: &Rational) -> Value {
    json!({ "exact": q.to_string(), "approx": rational_to_f64(q) })
}

pub fn construct(args: ConstructArgs) -> Outcome {
    let (p, trace) = construct_path(args.n, args.s).map_err(construct_failure)?;
    let class = classify_good(&p);
    let diffs = p.diffs();

    let mapped = match &args.ap {
        None => None,
        Some(text) => {
            let parts = parse_list(text).map_err(usage)?;
            let [first, step] = <[Rational; 2]>::try_from(parts)
                .map_err(|_| usage("--ap expects FIRST,STEP"))?;
            let ap = ApSpec::new(first, step, args.n).map_err(usage)?;
            let image = ap_map(&p, &ap).map_err(|e| Failure::Internal(e.to_string()))?;
            Some((ap, image))
        }
    };
    if let Some((_, image)) = &mapped {
        if !gracepath::is_graceful_path(image) {
            return Err(Failure::Internal("progression image repeats a difference".into()));
        }
    }
    match trace.replay() {
        Ok(replayed) if replayed == p => {}
        _ => return Err(Failure::Internal("construction trace does not replay".into())),
    }
    let exceptional = is_exceptional(args.n, args.s);

    match args.format {
        Format::Json => {
            let mut result = json!({
                "n": args.n,
                "s": args.s,
                "sequence": p,
                "diffs": diffs,
                "graceful": p.is_graceful(),
                "good_class": class,
                "good": class.is_good(),
                "exceptional_start": exceptional,
            });
            if let Some((ap, image)) = &mapped {
                let image_diffs = if image.len() > 1 { abs_diffs(image).unwrap_or_default() } else { vec![] };
                result["progression"] = json!({
                    "first": ap.first().to_string(),
                    "step": ap.step().to_string(),
                    "sequence": strings(image),
                    "diffs": strings(&image_diffs),
                });
            }
            let inputs = json!({ "n": args.n, "s": args.s, "ap": args.ap, "trace": args.trace });
            let mut record = OutputRecord::new("construct", inputs, result);
            if args.trace {
                record.trace = Some(json!({
                    "steps": trace,
                    "rendered": trace.steps().iter().map(ToString::to_string).collect::<Vec<_>>(),
                }));
            }
            record.print();
        }
        Format::Plain => {
            match &mapped {
                Some((_, image)) => println!("{}", joined(image, ",")),
                None => println!("{p}"),
            }
            println!("diffs: {}", joined(&diffs, ","));
            println!("good: {class}");
            if args.trace {
                print!("{trace}");
            }
        }
        Format::Csv => {
            let mut header = "n,s,sequence,diffs,good_class,exceptional_start".to_string();
            let mut row = format!(
                "{},{},{},{},{},{}",
                args.n,
                args.s,
                joined(p.as_slice(), " "),
                joined(&diffs, " "),
                class,
                exceptional
            );
            if let Some((_, image)) = &mapped {
                header.push_str(",mapped");
                write!(row, ",{}", joined(image, " ")).unwrap();
            }
            if args.trace {
                header.push_str(",trace");
                write!(row, ",{}", joined(trace.steps(), "; ")).unwrap();
            }
            println!("{header}\n{row}");
        }
    }
    Ok(0)
}

pub fn verify(args: VerifyArgs) -> Outcome {
    let set = load_set(&args.source)?;
    let seq = if args.seq.trim() == "-" {
        read_list_stdin()
    } else {
        parse_list(&args.seq)
    }
    .map_err(usage)?;
    if seq.is_empty() {
        return Err(usage("empty sequence"));
    }
    let start = match &args.start {
        None => seq[0].clone(),
        Some(text) => match parse_list(text).map_err(usage)?.as_slice() {
            [x] => x.clone(),
            _ => return Err(usage("--start expects a single value")),
        },
    };
    let verdict = if args.cycle {
        verify_cycle_instance(&seq, &set)
    } else {
        verify_conjecture_instance(&start, &seq, &set)
    };
    let diffs = if args.cycle { cyclic_abs_diffs(&seq) } else { abs_diffs(&seq) };
    let result = json!({
        "verdict": verdict.code(),
        "valid": verdict.is_valid(),
        "diffs": diffs.ok().map(|d| strings(&d)),
    });
    let inputs = json!({
        "set": strings(set.elements()),
        "seq": strings(&seq),
        "start": start.to_string(),
        "cycle": args.cycle,
    });
    OutputRecord::new("verify", inputs, result).print();
    Ok(if verdict.is_valid() { 0 } else { EXIT_NEGATIVE })
}

struct SweepRow {
    n: usize,
    s: usize,
    exceptional: bool,
    constructed: Option<(String, bool, String, bool)>,
    oracle: Option<(bool, bool)>,
    mismatch: bool,
}

fn oracle_failure(e: SearchError) -> Failure {
    match e {
        SearchError::BudgetExhausted(_) => Failure::Usage(format!("{e}; raise --budget or {BUDGET_ENV}")),
        other => Failure::Internal(other.to_string()),
    }
}

pub fn sweep(args: SweepArgs) -> Outcome {
    let with_construct = args.mode != SweepMode::Oracle;
    let with_oracle = args.mode != SweepMode::Construct;
    if args.nmax == 0 {
        return Err(usage("NMAX must be at least 1"));
    }
    if with_oracle && args.nmax > ORACLE_NMAX {
        return Err(usage(format!("oracle mode is capped at n = {ORACLE_NMAX}")));
    }
    let budget = resolve_budget(args.budget)?;

    let mut rows = Vec::new();
    for n in 1..=args.nmax {
        for s in 1..=n {
            let exceptional = is_exceptional(n, s);
            let mut mismatch = false;
            let constructed = if with_construct {
                let (p, _) = construct_path(n, s).map_err(construct_failure)?;
                let class = classify_good(&p);
                let graceful = p.is_graceful() && p.start() == s;
                mismatch |= !graceful || (!exceptional && !class.is_good());
                Some((joined(p.as_slice(), " "), graceful, class.to_string(), class.is_good()))
            } else {
                None
            };
            let oracle = if with_oracle {
                let path = oracle::exists_path(n, s, budget).map_err(oracle_failure)?;
                let good = oracle::exists_good(n, s, None, budget).map_err(oracle_failure)?;
                mismatch |= !path || (!exceptional && !good);
                if let Some((_, _, _, constructed_good)) = &constructed {
                    mismatch |= *constructed_good && !good;
                }
                Some((path, good))
            } else {
                None
            };
            rows.push(SweepRow { n, s, exceptional, constructed, oracle, mismatch });
        }
    }

    let mut out = String::from(
        "n,s,exceptional_start,sequence,graceful,good_class,oracle_path_exists,oracle_good_exists,mismatch\n",
    );
    let opt = |b: Option<bool>| b.map(|b| b.to_string()).unwrap_or_default();
    for r in &rows {
        let (seq, graceful, class) = match &r.constructed {
            Some((seq, g, class, _)) => (seq.as_str(), Some(*g), class.as_str()),
            None => ("", None, ""),
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.n,
            r.s,
            r.exceptional,
            seq,
            opt(graceful),
            class,
            opt(r.oracle.map(|o| o.0)),
            opt(r.oracle.map(|o| o.1)),
            r.mismatch
        )
        .unwrap();
    }
    emit(&out);
    let mismatches = rows.iter().filter(|r| r.mismatch).count();
    eprintln!("rows={} mismatches={mismatches}", rows.len());
    Ok(if mismatches == 0 { 0 } else { EXIT_NEGATIVE })
}

fn cycle_json<T: Scalar>(set: &RealSet<T>, budget: SearchBudget) -> Result<(Value, bool), Failure> {
    let (outcome, cycle) = match oracle::graceful_cycle_search(set, budget) {
        Ok(Some(c)) => ("found", Some(c)),
        Ok(None) => ("proven-none", None),
        Err(SearchError::BudgetExhausted(_)) => ("budget-exhausted", None),
        Err(e) => return Err(usage(e)),
    };
    if let Some(c) = &cycle {
        if !verify_cycle_instance(c, set).is_valid() {
            return Err(Failure::Internal("returned cycle fails verification".into()));
        }
    }
    let obstructed = oracle::cycle_parity_obstructed(set).ok();
    if obstructed == Some(true) && cycle.is_some() {
        return Err(Failure::Internal("cycle found despite parity obstruction".into()));
    }
    let value = json!({
        "outcome": outcome,
        "cycle": cycle.as_ref().map(|c| strings(c)),
        "diffs": cycle.as_ref().and_then(|c| cyclic_abs_diffs(c).ok()).map(|d| strings(&d)),
        "parity_obstructed": obstructed,
    });
    Ok((value, cycle.is_some()))
}

pub fn cycle(args: CycleArgs) -> Outcome {
    let set = load_set(&args.source)?;
    if set.len() < 3 {
        return Err(usage("cycle search needs at least 3 elements"));
    }
    let budget = resolve_budget(args.budget)?;
    let (result, found) = match as_int_set(&set) {
        Some(ints) => cycle_json(&ints, budget)?,
        None => cycle_json(&set, budget)?,
    };
    let inputs = json!({ "set": strings(set.elements()), "budget": budget.max_nodes });
    OutputRecord::new("cycle", inputs, result).print();
    Ok(if found { 0 } else { EXIT_NEGATIVE })
}

fn stats_json<T: Scalar>(set: &RealSet<T>, args: &StatsArgs, budget: SearchBudget) -> Result<Value, Failure> {
    let ds = stats::diff_stats(set).map_err(usage)?;
    let bound = stats::expectation_bound(set).map_err(usage)?;
    let n = set.len();
    let (s_sum, s_rhs, s_ok) = stats::check_sum_s_lemma(set);
    let mut result = json!({
        "n": n,
        "diff_stats": {
            "positive_diff_count": ds.positive_diffs.len(),
            "sum_r": ds.sum_r(),
            "sum_r_squared": ds.sum_r_squared().to_string(),
            "max_r": ds.r.values().max(),
            "sum_s3": s_sum,
            "sum_s3_limit": s_rhs.to_string(),
            "sum_s3_within_limit": s_ok,
            "sidon": ds.is_sidon(),
        },
        "energy": bound.energy.to_string(),
        "c": rational_json(&bound.c),
        "bound": {
            "term_main": rational_json(&bound.term_main),
            "term_ap": rational_json(&bound.term_ap),
            "term_energy": rational_json(&bound.term_energy),
            "term_ap_lemma": rational_json(&bound.term_ap_lemma),
            "term_energy_form": rational_json(&bound.term_energy_form),
            "bound_exact": rational_json(&bound.bound_exact),
            "bound_energy_form": rational_json(&bound.bound_energy_form),
            "bound_exact_exceeds_n_minus_1": bound.certifies_cycle(),
            "bound_energy_form_exceeds_n_minus_1": bound.energy_form_exceeds(),
        },
    });
    if args.trials > 0 {
        let t = stats::monte_carlo_distinct(set, args.trials, args.seed).map_err(usage)?;
        result["monte_carlo"] = json!({
            "generator": "splitmix64",
            "trials": t.trials,
            "seed": t.seed,
            "mean_distinct": rational_json(&t.mean_distinct),
            "sample_variance": rational_json(&t.sample_variance),
            "sample_stddev": t.sample_stddev(),
            "min_distinct": t.min_distinct,
            "max_distinct": t.max_distinct,
        });
    }
    if args.exact {
        let expected = oracle::exact_expected_distinct(set).map_err(usage)?;
        let chain = expected >= bound.bound_exact && bound.bound_exact >= bound.bound_energy_form;
        if !chain {
            return Err(Failure::Internal("expectation below its lower bound".into()));
        }
        let (cycle, _) = cycle_json(set, budget)?;
        result["exact"] = json!({
            "expected_distinct": rational_json(&expected),
            "bound_chain_holds": chain,
            "cycle_search": cycle,
        });
    }
    Ok(result)
}

pub fn stats(args: StatsArgs) -> Outcome {
    let set = load_set(&args.source)?;
    if set.len() < 4 {
        return Err(usage(format!("stats needs at least 4 elements, got {}", set.len())));
    }
    if args.exact && set.len() > oracle::MAX_EXACT_SET {
        return Err(usage(format!(
            "--exact enumerates at most {} elements, got {}",
            oracle::MAX_EXACT_SET,
            set.len()
        )));
    }
    let budget = resolve_budget(args.budget)?;
    let result = match as_int_set(&set) {
        Some(ints) => stats_json(&ints, &args, budget)?,
        None => stats_json(&set, &args, budget)?,
    };
    let inputs = json!({
        "set": strings(set.elements()),
        "trials": args.trials,
        "seed": args.seed,
        "exact": args.exact,
    });
    OutputRecord::new("stats", inputs, result).print();
    Ok(0)
}
