//! Bit-stable number formatting for CSV and JSON output.
//!
//! Every float is written with 17 significant digits in scientific notation, which
//! round-trips `f64` exactly and does not depend on locale.

use serde_json::{Map, Number, Value};

/// `x` with 17 significant digits, e.g. `2.0000000000000000e+0`.
pub fn sig17(x: f64) -> String {
    if x.is_finite() {
        let s = format!("{x:.16e}");
        match s.split_once('e') {
            Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
            _ => s,
        }
    } else if x.is_nan() {
        "NaN".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

/// A JSON number carrying exactly the text of [`sig17`]; non-finite values become `null`.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let text = sig17(x);
    Value::Number(serde_json::from_str::<Number>(&text).expect("sig17 output is a JSON number"))
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

/// Rewrites every floating-point number in `value` to its [`sig17`] form. Integers
/// are left untouched.
pub fn normalize_numbers(value: Value) -> Value {
    match value {
        Value::Number(n) => {
            // arbitrary_precision keeps the source text; integers have no '.', 'e' or 'E'
            let text = n.to_string();
            if text.contains(['.', 'e', 'E']) {
                num(text.parse::<f64>().expect("JSON number parses as f64"))
            } else {
                Value::Number(n)
            }
        }
        Value::Array(items) => Value::Array(items.into_iter().map(normalize_numbers).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, normalize_numbers(v)))
                .collect::<Map<String, Value>>(),
        ),
        other => other,
    }
}

/// Pretty JSON with normalized numbers and a trailing newline.
pub fn to_json_string<T: serde::Serialize>(value: &T) -> serde_json::Result<String> {
    let v = normalize_numbers(serde_json::to_value(value)?);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}
