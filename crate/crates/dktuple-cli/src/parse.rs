//! Argument parsing helpers: comma-separated element sets and big integers.

use anyhow::{bail, Context, Result};
use num_bigint::{BigInt, BigUint};
use std::str::FromStr;

/// Parses `"1,33,68,105"` into a strictly increasing element list.
/// Input order is free; duplicates are an input error.
pub fn element_set(raw: &str) -> Result<Vec<BigUint>> {
    let mut out = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        if part.is_empty() {
            bail!("empty element in set '{raw}'");
        }
        out.push(BigUint::from_str(part).with_context(|| format!("bad element '{part}'"))?);
    }
    out.sort();
    let before = out.len();
    out.dedup();
    if out.len() != before {
        bail!("duplicate elements in set '{raw}'");
    }
    Ok(out)
}

/// Residue list for character sums: unsorted, duplicates left for the
/// library to reject (they violate set semantics, not syntax).
pub fn residue_set(raw: &str) -> Result<Vec<u64>> {
    raw.split(',')
        .map(|part| {
            part.trim()
                .parse::<u64>()
                .with_context(|| format!("bad residue '{part}'"))
        })
        .collect()
}

pub fn bigint(raw: &str) -> Result<BigInt> {
    BigInt::from_str(raw.trim()).with_context(|| format!("bad integer '{raw}'"))
}

pub fn biguint(raw: &str) -> Result<BigUint> {
    BigUint::from_str(raw.trim()).with_context(|| format!("bad nonnegative integer '{raw}'"))
}
