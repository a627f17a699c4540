//! Parsing of set and sequence arguments.
//!
//! Grammar: comma-separated items, each an integer, a rational `p/q`, or an
//! integer range `a..b` (inclusive). Files hold one item per line; blank
//! lines and `#` comments are skipped.

use std::io::BufRead;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use gracepath::{Rational, RationalSet, RealSet, Scalar};
use num_traits::ToPrimitive;

fn parse_item(item: &str, out: &mut Vec<Rational>) -> Result<()> {
    let item = item.trim();
    if item.is_empty() {
        return Ok(());
    }
    if let Some((lo, hi)) = item.split_once("..") {
        let lo: i64 = lo.trim().parse().with_context(|| format!("bad range start in `{item}`"))?;
        let hi: i64 = hi.trim().parse().with_context(|| format!("bad range end in `{item}`"))?;
        if lo > hi {
            bail!("empty range `{item}`");
        }
        out.extend((lo..=hi).map(|k| Rational::from_integer(k.into())));
        return Ok(());
    }
    let q: Rational = item
        .parse()
        .map_err(|e| anyhow!("`{item}` is not an integer or rational: {e}"))?;
    out.push(q);
    Ok(())
}

/// Parses an inline list such as `1..5,7/2,-3`.
pub fn parse_list(text: &str) -> Result<Vec<Rational>> {
    let text = text.trim().trim_start_matches(['(', '{', '[']).trim_end_matches([')', '}', ']']);
    let mut out = Vec::new();
    for item in text.split(',') {
        parse_item(item, &mut out)?;
    }
    Ok(out)
}

pub fn read_list_file(path: &Path) -> Result<Vec<Rational>> {
    let file = std::fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut out = Vec::new();
    for line in std::io::BufReader::new(file).lines() {
        let line = line?;
        let line = line.split('#').next().unwrap_or("");
        parse_item(line, &mut out)?;
    }
    Ok(out)
}

/// First non-empty line of stdin, parsed as a list.
pub fn read_list_stdin() -> Result<Vec<Rational>> {
    for line in std::io::stdin().lock().lines() {
        let line = line?;
        if !line.trim().is_empty() {
            return parse_list(&line);
        }
    }
    bail!("no sequence on standard input")
}

pub fn make_set(elements: Vec<Rational>) -> Result<RationalSet> {
    RealSet::new(elements).map_err(|e| anyhow!("invalid set: {e}"))
}

/// The same set over `i64` when every element is an integer small enough
/// that sums and differences cannot overflow.
pub fn as_int_set(set: &RationalSet) -> Option<RealSet<i64>> {
    const LIMIT: i128 = 1 << 60;
    let ints: Option<Vec<i64>> = set
        .elements()
        .iter()
        .map(|q| q.as_i128().filter(|k| k.abs() < LIMIT).and_then(|k| k.to_i64()))
        .collect();
    ints.map(|v| RealSet::new(v).expect("distinct integers"))
}
