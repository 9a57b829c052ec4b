//! JSON interchange for cube functions and level profiles.
//!
//! A function document is
//!
//! ```json
//! {"n": 2, "format": "truth_table", "values": [1, -1, -1, 1], "convention": "bit0_plus_one"}
//! {"n": 2, "format": "fourier", "values": [["11", 1.0]], "convention": "bit0_plus_one"}
//! ```
//!
//! Truth tables are indexed so that bit `k` of the index is 0 when
//! `x_{k+1} = +1`. Fourier masks are binary strings written most significant
//! bit first, so `"10"` is the set `{2}` and `"01"` is `{1}`; strings shorter
//! than `n` are zero-padded on the left. A level profile is
//! `{"n": int, "levels": [...]}` with `levels[k]` the value at Hamming
//! weight `k`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cube::{CubeFunction, FourierExpansion};
use crate::error::{Error, Result};
use crate::symmetric::LevelProfile;

/// The only bit convention this crate reads or writes.
pub const CONVENTION: &str = "bit0_plus_one";

/// Encoding of the `values` array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    TruthTable,
    Fourier,
}

/// Anything the CLI accepts as input.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Function(CubeFunction),
    Profile(LevelProfile),
}

fn schema(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { field: field.into(), message: message.into() }
}

/// `mask` as an `n`-character binary string, most significant bit first.
pub fn format_mask(mask: usize, n: usize) -> String {
    (0..n).rev().map(|k| if mask >> k & 1 == 1 { '1' } else { '0' }).collect()
}

/// Inverse of [`format_mask`]; shorter strings are left-padded with zeros.
pub fn parse_mask(s: &str, n: usize) -> Result<usize> {
    if s.is_empty() || s.len() > n || !s.bytes().all(|b| b == b'0' || b == b'1') {
        return Err(schema("mask", format!("`{s}` is not a binary string of at most {n} digits")));
    }
    Ok(usize::from_str_radix(s, 2).expect("validated binary string"))
}

fn parse_document(text: &str) -> Result<serde_json::Map<String, Value>> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| schema(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
    match v {
        Value::Object(map) => Ok(map),
        _ => Err(schema("$", "expected a JSON object")),
    }
}

fn field_n(map: &serde_json::Map<String, Value>) -> Result<usize> {
    let n = map.get("n").ok_or_else(|| schema("n", "missing"))?;
    n.as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| schema("n", format!("expected a non-negative integer, got {n}")))
}

fn real(v: &Value, field: impl Fn() -> String) -> Result<f64> {
    v.as_f64().ok_or_else(|| schema(field(), format!("expected a number, got {v}")))
}

fn located(e: Error, field: &str) -> Error {
    match e {
        Error::Schema { .. } => e,
        other => schema(field, other.to_string()),
    }
}

/// Reads a function or a level profile, deciding by the presence of `levels`.
pub fn parse_input(text: &str) -> Result<Input> {
    let map = parse_document(text)?;
    if map.contains_key("levels") {
        return profile_from_map(&map).map(Input::Profile);
    }
    function_from_map(&map).map(Input::Function)
}

/// Reads a function document.
pub fn parse_function(text: &str) -> Result<CubeFunction> {
    function_from_map(&parse_document(text)?)
}

/// Reads a level-profile document.
pub fn parse_profile(text: &str) -> Result<LevelProfile> {
    profile_from_map(&parse_document(text)?)
}

fn function_from_map(map: &serde_json::Map<String, Value>) -> Result<CubeFunction> {
    if let Some(c) = map.get("convention") {
        if c.as_str() != Some(CONVENTION) {
            return Err(schema("convention", format!("unsupported convention {c}, expected \"{CONVENTION}\"")));
        }
    }
    let n = field_n(map)?;
    let format: Format = match map.get("format") {
        None => return Err(schema("format", "missing")),
        Some(f) => serde_json::from_value(f.clone())
            .map_err(|_| schema("format", format!("expected \"truth_table\" or \"fourier\", got {f}")))?,
    };
    let values = map
        .get("values")
        .ok_or_else(|| schema("values", "missing"))?
        .as_array()
        .ok_or_else(|| schema("values", "expected an array"))?;
    match format {
        Format::TruthTable => {
            let table = values
                .iter()
                .enumerate()
                .map(|(i, v)| real(v, || format!("values[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            CubeFunction::from_truth_table(n, table).map_err(|e| located(e, "values"))
        }
        Format::Fourier => {
            if n == 0 || n > crate::cube::MAX_VARS {
                return Err(schema("n", Error::TooLarge(n).to_string()));
            }
            let mut pairs = Vec::with_capacity(values.len());
            for (i, v) in values.iter().enumerate() {
                let field = format!("values[{i}]");
                let pair = v.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                    schema(field.clone(), "expected a [\"mask\", coefficient] pair")
                })?;
                let mask = pair[0].as_str().ok_or_else(|| schema(field.clone(), "mask must be a string"))?;
                let mask = parse_mask(mask, n).map_err(|e| located_msg(e, &field))?;
                let c = real(&pair[1], || field.clone())?;
                if !c.is_finite() {
                    return Err(schema(field, "coefficient is not finite"));
                }
                pairs.push((mask, c));
            }
            FourierExpansion::from_pairs(n, pairs)
                .and_then(|e| e.synthesize())
                .map_err(|e| located(e, "values"))
        }
    }
}

fn located_msg(e: Error, field: &str) -> Error {
    match e {
        Error::Schema { message, .. } => schema(field, message),
        other => schema(field, other.to_string()),
    }
}

fn profile_from_map(map: &serde_json::Map<String, Value>) -> Result<LevelProfile> {
    let n = field_n(map)?;
    let levels = map
        .get("levels")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("levels", "expected an array"))?
        .iter()
        .enumerate()
        .map(|(i, v)| real(v, || format!("levels[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    LevelProfile::new(n, levels).map_err(|e| located(e, "levels"))
}

/// Function document in the requested format; Fourier output lists only
/// coefficients with magnitude above `tol`.
pub fn function_to_json(f: &CubeFunction, format: Format, tol: f64) -> Value {
    let n = f.n();
    let values: Vec<Value> = match format {
        Format::TruthTable => f.values().iter().map(|&v| json!(v)).collect(),
        Format::Fourier => f
            .fourier()
            .support(tol)
            .map(|(m, c)| json!([format_mask(m, n), c]))
            .collect(),
    };
    json!({ "n": n, "format": format, "values": values, "convention": CONVENTION })
}

pub fn profile_to_json(lp: &LevelProfile) -> Value {
    json!({ "n": lp.n(), "levels": lp.levels() })
}
