//! Text tables and decimal display for command payloads.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::Value;

/// `round(num / den)` with halves rounded away from zero; `den > 0`.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let q: BigInt = (num.abs() * 2 + den) / (den * 2);
    if num.is_negative() && !q.is_zero() {
        -q
    } else {
        q
    }
}

/// `num/den` rounded to `digits` decimal places.
pub fn decimal(num: &BigInt, den: &BigInt, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = round_div(&(num * &scale), den);
    let negative = scaled.sign() == num_bigint::Sign::Minus;
    let mut s = scaled.magnitude().to_string();
    if digits > 0 {
        if s.len() <= digits {
            s = "0".repeat(digits + 1 - s.len()) + &s;
        }
        s.insert(s.len() - digits, '.');
    }
    if negative {
        s.insert(0, '-');
    }
    s
}

fn parse_int(v: &Value) -> Option<BigInt> {
    match v {
        Value::String(s) => s.parse().ok(),
        Value::Number(n) => n.to_string().parse().ok(),
        _ => None,
    }
}

/// Reads `{"numerator": .., "denominator": ..}`.
pub fn rational_parts(v: &Value) -> Option<(BigInt, BigInt)> {
    Some((parse_int(v.get("numerator")?)?, parse_int(v.get("denominator")?)?))
}

/// `p/q` (or `p`), followed by `≈ x` when a decimal precision is requested.
pub fn rational(v: &Value, digits: Option<usize>) -> String {
    let Some((n, d)) = rational_parts(v) else {
        return plain(v);
    };
    let exact = if d == BigInt::from(1) { n.to_string() } else { format!("{n}/{d}") };
    match digits {
        Some(k) => format!("{exact}  ≈ {}", decimal(&n, &d, k)),
        None => exact,
    }
}

pub fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Adds a `decimal_display_only` field next to every numerator/denominator pair.
pub fn annotate_decimals(v: &mut Value, digits: usize) {
    match v {
        Value::Object(map) => {
            if let Some((n, d)) = rational_parts(&Value::Object(map.clone())) {
                map.insert("decimal_display_only".into(), Value::String(decimal(&n, &d, digits)));
            }
            for child in map.values_mut() {
                annotate_decimals(child, digits);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| annotate_decimals(x, digits)),
        _ => {}
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(cell);
            } else {
                s.push_str(cell);
                s.push_str(&" ".repeat(w - cell.chars().count() + 2));
            }
        }
        s.push('\n');
        s
    };
    let mut out = line(headers.to_vec());
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn decimal_note(digits: Option<usize>) -> String {
    match digits {
        Some(k) => format!("(≈ values are display-only, rounded to {k} decimal digits)\n"),
        None => String::new(),
    }
}
