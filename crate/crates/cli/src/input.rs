//! Reading JSON arguments that are either inline or a path to a file.

use std::fs;

use anyhow::{bail, Context, Result};
use resonax_core::mc::DomainSpec;
use resonax_core::{
    validate_weight_matrix, Character, PolyMap, Polynomial, WeightMatrix, WeightWarning,
};
use serde::de::DeserializeOwned;
use serde_json::Value;

/// Inline JSON if the argument starts like JSON, otherwise a file path.
pub fn load(flag: &str, arg: &str) -> Result<(String, String)> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with(['[', '{', '"']) || trimmed.is_empty() {
        return Ok((arg.to_string(), format!("{flag} (inline)")));
    }
    let text =
        fs::read_to_string(arg).with_context(|| format!("{flag}: cannot read file '{arg}'"))?;
    Ok((text, format!("{flag} ({arg})")))
}

/// Parses with serde_json so syntax errors carry line and column.
pub fn parse<T: DeserializeOwned>(flag: &str, arg: &str) -> Result<T> {
    let (text, origin) = load(flag, arg)?;
    serde_json::from_str(&text).with_context(|| format!("malformed JSON in {origin}"))
}

/// `[[...], ...]` or `{"rows": [[...], ...]}`.
pub fn weights(flag: &str, arg: &str) -> Result<(WeightMatrix, Vec<WeightWarning>)> {
    let value: Value = parse(flag, arg)?;
    let rows: Vec<Vec<i64>> = match value {
        Value::Array(_) => serde_json::from_value(value),
        Value::Object(mut o) => match o.remove("rows") {
            Some(rows) => serde_json::from_value(rows),
            None => bail!("{flag}: weight object needs a \"rows\" field"),
        },
        _ => bail!("{flag}: expected [[...]] or {{\"rows\": [[...]]}}"),
    }
    .with_context(|| format!("{flag}: weight rows must be arrays of integers"))?;
    validate_weight_matrix(rows).with_context(|| format!("{flag}: invalid weight matrix"))
}

/// A JSON integer array, e.g. `[3]` or `[1,-2]`.
pub fn character(flag: &str, arg: &str) -> Result<Character> {
    parse(flag, arg)
}

/// Quasi-circular weights: `[1,2]` or a one-column matrix `[[1],[2]]`.
pub fn weight_vector(flag: &str, arg: &str) -> Result<Vec<i64>> {
    let value: Value = parse(flag, arg)?;
    if let Ok(v) = serde_json::from_value::<Vec<i64>>(value.clone()) {
        return Ok(v);
    }
    let (a, _) = weights(flag, arg)?;
    if a.r() != 1 {
        bail!(
            "{flag}: quasi-circular weights need a single column, got {}",
            a.r()
        );
    }
    Ok(a.rows().iter().map(|r| r[0]).collect())
}

pub fn polymap(flag: &str, arg: &str) -> Result<PolyMap> {
    parse(flag, arg)
}

/// A term list `[{"exp": [..], "re": "p/q", "im": "p/q"}, ...]` in `n` variables.
pub fn polynomial(flag: &str, arg: &str, n: usize) -> Result<Polynomial> {
    let (text, origin) = load(flag, arg)?;
    Polynomial::from_json_str(n, &text).with_context(|| format!("invalid polynomial in {origin}"))
}

pub fn domain(flag: &str, arg: &str) -> Result<DomainSpec> {
    parse(flag, arg)
}
