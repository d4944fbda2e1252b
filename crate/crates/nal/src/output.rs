//! Deterministic JSON and CSV emission.

use serde_json::{Map, Value};

/// Significant digits kept for every float written to JSON.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// `x` rounded to [`SIGNIFICANT_DIGITS`]; the shortest representation of the
/// result is then at most that long.
pub fn round(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

/// Non-finite values become `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round(x)).map_or(Value::Null, Value::Number)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| num(x)).collect())
}

/// Object with keys in insertion order.
pub fn object<K: Into<String>>(entries: impl IntoIterator<Item = (K, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in entries {
        m.insert(k.into(), v);
    }
    Value::Object(m)
}

pub fn to_string(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_twelve_digits() {
        assert_eq!(round(std::f64::consts::PI).to_string(), "3.14159265359");
        assert_eq!(round(-1.0 / 3.0e-7), -3333333.33333);
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(serde_json::to_string(&num(0.1 + 0.2)).unwrap(), "0.3");
    }
}
