//! Canonical JSON: sorted keys, two-space indentation, LF, trailing newline.

use serde::Serialize;

pub fn to_canonical_string<T: Serialize + ?Sized>(value: &T) -> serde_json::Result<String> {
    // serde_json's Map is a BTreeMap without `preserve_order`, so keys come out sorted
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Parse arbitrary JSON text and re-emit it canonically.
pub fn canonicalize(text: &str) -> serde_json::Result<String> {
    let v: serde_json::Value = serde_json::from_str(text)?;
    to_canonical_string(&v)
}
