//! JSON input descriptions and their conversion to HN data.
//!
//! An input file is a single JSON object with exactly one top-level variant
//! key — `hn`, `filtration` or `p1_bundle` — so fixtures are diffable and
//! unambiguous. Rationals cross the boundary as strings `p/q` (or `p`) to
//! avoid any floating-point ambiguity; unknown keys are rejected.

use std::fs;
use std::path::Path;

use serde::Deserialize;

use hn_core::{FilteredVectorSpace, HNData, Rational, SplitP1Bundle};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InputSpec {
    Hn {
        slopes: Vec<String>,
        ranks: Vec<u64>,
    },
    Filtration {
        jumps: Vec<String>,
        step_dims: Vec<u64>,
    },
    P1Bundle {
        degrees: Vec<i64>,
        mults: Vec<u64>,
    },
}

/// HN data extracted from an input description, plus any warnings the
/// conversion produced (emitted as `#`-prefixed comment lines).
pub struct LoadedInput {
    pub data: HNData,
    pub warnings: Vec<String>,
}

pub fn load(path: &Path) -> Result<LoadedInput, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let spec: InputSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    realize(spec)
}

fn realize(spec: InputSpec) -> Result<LoadedInput, CliError> {
    match spec {
        InputSpec::Hn { slopes, ranks } => {
            let slopes = parse_rationals(&slopes)?;
            let data = HNData::new(slopes, ranks).map_err(validation)?;
            Ok(LoadedInput {
                data,
                warnings: Vec::new(),
            })
        }
        InputSpec::Filtration { jumps, step_dims } => {
            let jumps = parse_rationals(&jumps)?;
            let fvs = FilteredVectorSpace::new(jumps, step_dims).map_err(validation)?;
            let mut warnings = Vec::new();
            if fvs.has_negative_jump() {
                warnings.push("lowest jump value is negative".to_string());
            }
            Ok(LoadedInput {
                data: fvs.hn_data(),
                warnings,
            })
        }
        InputSpec::P1Bundle { degrees, mults } => {
            let bundle = SplitP1Bundle::new(degrees, mults).map_err(validation)?;
            Ok(LoadedInput {
                data: bundle.hn_data(),
                warnings: Vec::new(),
            })
        }
    }
}

fn validation(err: hn_core::DataError) -> CliError {
    CliError::Validation(err.to_string())
}

fn parse_rationals(strings: &[String]) -> Result<Vec<Rational>, CliError> {
    strings.iter().map(|s| parse_rational(s)).collect()
}

/// [`parse_rational`] with a plain-string error, for clap.
pub fn parse_rational_arg(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.message().to_string())
}

/// Parses `[-]digits[/digits]`. Stricter than `Rational`'s own `FromStr`:
/// no signs in the denominator, no empty parts, denominator nonzero.
pub fn parse_rational(text: &str) -> Result<Rational, CliError> {
    let bad = || CliError::Parse(format!("invalid rational {text:?}; expected p or p/q"));
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let digits = numer.strip_prefix('-').unwrap_or(numer);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    if let Some(d) = denom {
        if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        if d.bytes().all(|b| b == b'0') {
            return Err(CliError::Parse(format!(
                "invalid rational {text:?}: zero denominator"
            )));
        }
    }
    text.parse::<Rational>().map_err(|_| bad())
}
