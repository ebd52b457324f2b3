//! Plain-text formats: matrices like `2 -1; -1 2` and `K2` factor lists.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::gcm::{Gcm, GcmError};
use crate::k2::{canonicalize, FactorKind, K2Factor};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixTextError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid GCM: {0}")]
    Validation(#[from] GcmError),
}

/// Parses rows separated by `;` or newlines with entries separated by
/// whitespace or commas. Brackets are ignored and blank rows skipped.
pub fn parse_matrix(text: &str) -> Result<Gcm, MatrixTextError> {
    let rows = parse_rows(text)?;
    Ok(Gcm::from_rows(&rows)?)
}

/// Rectangular integer rows without the GCM checks.
pub fn parse_rows(text: &str) -> Result<Vec<Vec<BigInt>>, MatrixTextError> {
    let cleaned: String = text
        .chars()
        .map(|c| match c {
            '[' | ']' | '(' | ')' | ',' => ' ',
            c => c,
        })
        .collect();
    let mut rows = Vec::new();
    for line in cleaned.split([';', '\n']) {
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.is_empty() {
            continue;
        }
        let row = entries
            .iter()
            .map(|e| {
                e.parse::<BigInt>()
                    .map_err(|_| MatrixTextError::Parse(format!("'{e}' is not an integer")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let Some(first) = rows.first() else {
        return Err(MatrixTextError::Parse("no entries".to_string()));
    };
    let width = first.len();
    if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
        return Err(MatrixTextError::Parse(format!(
            "row {} has {} entries, expected {width}",
            k + 1,
            r.len()
        )));
    }
    Ok(rows)
}

/// Display name of one factor.
pub fn factor_name(f: &K2Factor) -> String {
    match (f.kind, f.r.is_zero(), f.r.is_one()) {
        (FactorKind::Symbol, true, _) => "K2(F)".to_string(),
        (FactorKind::Symbol, false, _) => format!("K2(F)/{}K2(F)", f.r),
        (FactorKind::Cocycle, true, _) => "K2(2,F)".to_string(),
        (FactorKind::Cocycle, false, true) => "K2(2,F)/<{u^2,v}>".to_string(),
        (FactorKind::Cocycle, false, false) => format!("K2(2,F)/{}<{{u^2,v}}>", f.r),
    }
}

/// Factors joined by ` x `, `1` for the trivial group, with a note on the
/// factors isomorphic to `I^2(F)`.
pub fn render_factors(factors: &[K2Factor]) -> String {
    let factors = canonicalize(factors.iter().cloned());
    if factors.is_empty() {
        return "1".to_string();
    }
    let names: Vec<String> = factors.iter().map(factor_name).collect();
    let mut out = names.join(" x ");
    let i2: Vec<usize> = factors
        .iter()
        .enumerate()
        .filter(|(_, f)| f.kind == FactorKind::Cocycle && f.r.is_one())
        .map(|(k, _)| k)
        .collect();
    if !i2.is_empty() {
        let words: Vec<String> = i2.iter().map(|&k| ordinal(k + 1)).collect();
        let (noun, list) = match words.as_slice() {
            [one] => ("factor", one.clone()),
            [init @ .., last] => ("factors", format!("{} and {last}", init.join(", "))),
            [] => unreachable!(),
        };
        out.push_str(&format!("  ({list} {noun} ≅ I^2(F))"));
    }
    out
}

fn ordinal(n: usize) -> String {
    const WORDS: [&str; 10] = [
        "first", "second", "third", "fourth", "fifth", "sixth", "seventh", "eighth", "ninth",
        "tenth",
    ];
    match WORDS.get(n - 1) {
        Some(w) => w.to_string(),
        None => format!("{n}th"),
    }
}

/// Parses the short notation `S0 S4 C1` (also comma separated).
pub fn parse_factor_list(text: &str) -> Result<Vec<K2Factor>, String> {
    text.split([' ', ','])
        .filter(|t| !t.is_empty())
        .map(|t| {
            let (kind, num) = t.split_at(1);
            let r: BigInt = num.parse().map_err(|_| format!("bad factor '{t}'"))?;
            match kind {
                "S" => Ok(K2Factor::symbol(r)),
                "C" => Ok(K2Factor::cocycle(r)),
                _ => Err(format!("bad factor '{t}'")),
            }
        })
        .collect()
}
