//! Deterministic number formatting shared by every export.

use num_complex::Complex64;

/// 12 significant digits, trailing zeros trimmed; magnitudes below 1e-12 print as `0`.
pub fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() < 1e-12 {
        return "0".to_string();
    }
    let rounded: f64 = format!("{x:.11e}").parse().unwrap();
    let s = format!("{rounded}");
    if s.len() > 24 {
        format!("{rounded:e}")
    } else {
        s
    }
}

/// JSON number carrying the same 12 significant digits; non-finite values
/// become strings.
pub fn json_f64(x: f64) -> serde_json::Value {
    if !x.is_finite() {
        return serde_json::Value::String(format!("{x}"));
    }
    let rounded: f64 = fmt_f64(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map_or(serde_json::Value::Null, serde_json::Value::Number)
}

/// `a+bi` with both parts through [`fmt_f64`].
pub fn fmt_complex(z: Complex64) -> String {
    let re = fmt_f64(z.re);
    let im = fmt_f64(z.im);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}
